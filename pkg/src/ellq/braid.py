"""Braid monoid words, length-preserving rewriting, and the ladder words t_d.

Words are tuples of 1-based letters (letter i stands for the generator s_i).
The defining relations

    s_i s_{i+1} s_i = s_{i+1} s_i s_{i+1},        |i - j| > 1  =>  s_i s_j = s_j s_i

preserve length, so the rewriting class of any word is finite and breadth-first
search over it terminates.  The distinguished words

    t_1 = (),    t_d = t_{d-1} s_{d-1} s_{d-2} ... s_1

have length d(d-1)/2 and project to the order-reversing permutation of the
first d strands.
"""

from __future__ import annotations

from collections import deque
from typing import Iterator

from .numerics import ConfigError, LemmaError

BraidWord = tuple[int, ...]

FRONTIER_CAP = 10**6


def build_td(d: int) -> BraidWord:
    if d < 1:
        raise ConfigError(f"t_d needs d >= 1, got {d}")
    word: list[int] = []
    for k in range(2, d + 1):
        word.extend(range(k - 1, 0, -1))
    return tuple(word)


def project_sn(word: BraidWord, n: int) -> tuple[int, ...]:
    """Image in the symmetric group, as the tuple (sigma(0), ..., sigma(n-1)) 0-based."""
    sigma = list(range(n))
    for letter in word:
        i = letter - 1
        sigma[i], sigma[i + 1] = sigma[i + 1], sigma[i]
    return tuple(sigma)


def compose_perm(s1: tuple[int, ...], s2: tuple[int, ...]) -> tuple[int, ...]:
    """(s1 o s2)(k) = s1(s2(k))."""
    return tuple(s1[s2[k]] for k in range(len(s1)))


def _neighbors(word: BraidWord) -> Iterator[BraidWord]:
    m = len(word)
    for t in range(m - 1):
        a, b = word[t], word[t + 1]
        if abs(a - b) > 1:
            yield word[:t] + (b, a) + word[t + 2:]
    for t in range(m - 2):
        a, b, c = word[t], word[t + 1], word[t + 2]
        if a == c and abs(a - b) == 1:
            yield word[:t] + (b, a, b) + word[t + 3:]


def rewriting_class(word: BraidWord, stop=None, cap: int = FRONTIER_CAP) -> set[BraidWord]:
    """BFS over length-preserving rewrites; ``stop`` may abort the search early."""
    seen = {word}
    queue = deque([word])
    while queue:
        cur = queue.popleft()
        if stop is not None and stop(cur):
            return seen
        for nxt in _neighbors(cur):
            if nxt not in seen:
                if len(seen) >= cap:
                    raise ConfigError("rewriting-class frontier cap exceeded")
                seen.add(nxt)
                queue.append(nxt)
    return seen


def equivalent(w1: BraidWord, w2: BraidWord) -> bool:
    if len(w1) != len(w2):
        return False
    if w1 == w2:
        return True
    found = False

    def stop(w):
        nonlocal found
        found = w == w2
        return found

    rewriting_class(w1, stop=stop)
    return found


def extract_left(d: int, i: int) -> BraidWord:
    """A word b with t_d = s_i b, found by searching the rewriting class of t_d."""
    if not (2 <= d and 1 <= i < d):
        raise ConfigError(f"extraction needs 2 <= d and i < d, got d={d}, i={i}")
    hit: list[BraidWord] = []

    def stop(w):
        if w and w[0] == i:
            hit.append(w)
            return True
        return False

    rewriting_class(build_td(d), stop=stop)
    if not hit:
        raise LemmaError(f"no representative of t_{d} starting with s_{i}")
    return hit[0][1:]


def extract_right(d: int, i: int) -> BraidWord:
    """A word c with t_d = c s_i."""
    if not (2 <= d and 1 <= i < d):
        raise ConfigError(f"extraction needs 2 <= d and i < d, got d={d}, i={i}")
    hit: list[BraidWord] = []

    def stop(w):
        if w and w[-1] == i:
            hit.append(w)
            return True
        return False

    rewriting_class(build_td(d), stop=stop)
    if not hit:
        raise LemmaError(f"no representative of t_{d} ending with s_{i}")
    return hit[0][:-1]


def involution_star(word: BraidWord) -> BraidWord:
    """The anti-automorphism fixing the generators: word reversal."""
    return word[::-1]
