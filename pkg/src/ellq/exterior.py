"""Left and right elliptic exterior algebras and the sign/Laplace factors.

Left algebra ("v" generators).  A word is a product v_{k_m}(u_m) ... v_{k_1}(u_1),
stored left to right.  The complete rule set:

  * scalars commute with the shift  f(zeta) v_i(z) = v_i(z) f(zeta + omega(i)),
  * v_k(p^s q^2 z) v_j(z) = -q^{2 s zeta_kj} E(zeta_kj - 1)/E(zeta_kj + 1)
                              v_j(p^s q^2 z) v_k(z)          (k != j, any s),
  * v_k(z) v_j(p^s q^2 z) = q^{2 s zeta_jk} v_j(z) v_k(p^s q^2 z),
  * v_k(z) v_j(w) = 0 when z/w is not in p^Z q^{+-2} or k = j.

Ratio membership in p^Z q^{+-2} is decided exactly through the integer
exponents carried by spectral points; no floating-point ratio detection.
Normal form: indices strictly decreasing left to right, reached by bubble
swaps that permute indices while leaving each position's spectral argument in
place; coefficients created in the middle of a word are commuted out to the
far left.  The termination metric (number of index inversions) drops by one
per swap.

Right algebra ("w" generators): indices strictly increasing left to right,
with the single swap rule

  * w^k(z) w^j(p^s q^2 z) = -q^{2 s zeta_kj} w^j(z) w^k(p^s q^2 z)   (k != j),
  * w^k(z1) w^j(z2) = 0 when z2/z1 not in p^Z q^{+-2} or k = j.

Every right-algebra product arising here carries an ascending q^2-ladder, for
which this rule set is complete; a descending ladder raises RewriteError.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .numerics import (DynVar, Params, RewriteError, ScalarFn, Weight, e_func)
from .spectral import SpectralPoint

__all__ = [
    "ExtLetter", "ExtElement", "normal_form", "f_factors", "sign_factors",
    "v_normalized", "w_normalized", "s_factor", "s_l_closed", "s_r_closed",
    "coaction_extract_minor", "ext_sn_action",
]

ExtLetter = tuple[int, SpectralPoint]


def _qpow_linear(c: float, i: int, j: int, params: Params, tag: str = "") -> ScalarFn:
    """zeta -> q^{c (zeta_i - zeta_j)}."""
    return ScalarFn(lambda dv, c=c, i=i, j=j: params.qpow(c * dv.diff(i, j)),
                    tag or f"q^({c}z_{i}{j})")


def _e_of_diff(i: int, j: int, offset: float, params: Params) -> ScalarFn:
    return ScalarFn(lambda dv, i=i, j=j, o=offset: e_func(dv.diff(i, j) + o, params),
                    f"E(z_{i}{j}{offset:+g})")


def f_factors(I: Sequence[int], params: Params) -> tuple[ScalarFn, ScalarFn]:
    """(F_I, F^I): products of E(zeta_ij + 1) resp. E(zeta_ij) over i < j in I."""
    pairs = [(i, j) for i, j in itertools.combinations(sorted(I), 2)]

    def lower(dv: DynVar) -> complex:
        out = 1.0 + 0.0j
        for i, j in pairs:
            out *= e_func(dv.diff(i, j) + 1, params)
        return out

    def upper(dv: DynVar) -> complex:
        out = 1.0 + 0.0j
        for i, j in pairs:
            out *= e_func(dv.diff(i, j), params)
        return out

    return ScalarFn(lower, f"F_{tuple(I)}"), ScalarFn(upper, f"F^{tuple(I)}")


def sign_factors(I: Sequence[int], sigma: Mapping[int, int],
                 params: Params) -> tuple[ScalarFn, ScalarFn]:
    """Elliptic sign functions of a permutation restricted to I.

    Lower:  prod over inversions of E(zeta_{s(i)s(j)} + 1)/E(zeta_{s(j)s(i)} + 1);
    upper:  same with the +1 dropped (numerically the ordinary sign).
    """
    inv = [(sigma[i], sigma[j]) for i, j in itertools.combinations(sorted(I), 2)
           if sigma[i] > sigma[j]]

    def lower(dv: DynVar) -> complex:
        out = 1.0 + 0.0j
        for a, b in inv:
            out *= e_func(dv.diff(a, b) + 1, params) / e_func(dv.diff(b, a) + 1, params)
        return out

    def upper(dv: DynVar) -> complex:
        out = 1.0 + 0.0j
        for a, b in inv:
            out *= e_func(dv.diff(b, a), params) / e_func(dv.diff(a, b), params)
        return out

    return ScalarFn(lower, f"sgn_{tuple(I)}"), ScalarFn(upper, f"sgn^{tuple(I)}")


@dataclass
class ExtElement:
    """Finite sum of (coefficient, monomial) pairs, coefficient on the far left."""

    n: int
    side: str  # "left" or "right"
    terms: list[tuple[ScalarFn, tuple[ExtLetter, ...]]]

    @staticmethod
    def zero(n: int, side: str) -> "ExtElement":
        return ExtElement(n, side, [])

    @staticmethod
    def monomial(n: int, side: str, letters: Iterable[ExtLetter],
                 coef: ScalarFn | None = None) -> "ExtElement":
        return ExtElement(n, side, [(coef or ScalarFn.one(), tuple(letters))])

    def __add__(self, other: "ExtElement") -> "ExtElement":
        return ExtElement(self.n, self.side, self.terms + other.terms)

    def scale(self, f: ScalarFn) -> "ExtElement":
        return ExtElement(self.n, self.side, [(f * c, w) for c, w in self.terms])

    def __mul__(self, other: "ExtElement") -> "ExtElement":
        """Concatenate monomials; the right coefficient commutes to the far left."""
        out = []
        for c1, w1 in self.terms:
            shift = -Weight.of_indices(self.n, [idx for idx, _ in w1])
            for c2, w2 in other.terms:
                out.append((c1 * c2.shifted(shift), w1 + w2))
        return ExtElement(self.n, self.side, out)

    def collect(self) -> "ExtElement":
        """Merge terms with identical monomials (indices and exact spectral keys)."""
        acc: dict[tuple, tuple[ScalarFn, tuple[ExtLetter, ...]]] = {}
        for c, w in self.terms:
            key = tuple((idx, sp.key()) for idx, sp in w)
            if key in acc:
                acc[key] = (acc[key][0] + c, w)
            else:
                acc[key] = (c, w)
        return ExtElement(self.n, self.side, list(acc.values()))


def _swap_coefficient(side: str, left: ExtLetter, right: ExtLetter,
                      params: Params) -> ScalarFn | None:
    """Coefficient for swapping the adjacent pair (indices swap, arguments stay).

    Returns None when the pair annihilates the word.
    """
    k, u_left = left
    j, u_right = right
    if k == j:
        return None
    if side == "left":
        ratio = u_left.ratio_exponents(u_right)  # u_left / u_right = p^a q^b
        if ratio is None:
            return None
        a, b = ratio
        if b == 2:
            # E-ratio swap at u_left = p^a q^2 u_right
            num = _e_of_diff(k, j, -1.0, params)
            den = _e_of_diff(k, j, +1.0, params)
            return -(_qpow_linear(2 * a, k, j, params) * num / den)
        if b == -2:
            # plain-power swap at u_right = p^{-a} q^2 u_left
            return _qpow_linear(2 * a, k, j, params)
        return None
    # right algebra: nonzero only on the ascending ladder u_right = p^a q^2 u_left
    ratio = u_right.ratio_exponents(u_left)
    if ratio is None:
        return None
    a, b = ratio
    if b == 2:
        return -_qpow_linear(2 * a, k, j, params)
    if b == -2:
        raise RewriteError("descending spectral ladder in the right exterior algebra")
    return None


def _out_of_order(side: str, left_idx: int, right_idx: int) -> bool:
    if side == "left":
        return left_idx < right_idx  # target: strictly decreasing
    return left_idx > right_idx      # target: strictly increasing


def normal_form(letters: Sequence[ExtLetter], side: str, params: Params,
                strategy: str = "rightmost") -> ExtElement:
    """Rewrite a single word into the basis; total (zero is a valid output)."""
    n = params.n
    if any(idx < 0 or idx >= n for idx, _ in letters):
        raise ValueError("generator index out of range")
    work = [(ScalarFn.one(), tuple(letters))]
    done: list[tuple[ScalarFn, tuple[ExtLetter, ...]]] = []
    while work:
        coef, word = work.pop()
        # zero rules first: any adjacent annihilating pair kills the term
        dead = False
        for t in range(len(word) - 1):
            if _swap_coefficient(side, word[t], word[t + 1], params) is None:
                dead = True
                break
        if dead:
            continue
        positions = [t for t in range(len(word) - 1)
                     if _out_of_order(side, word[t][0], word[t + 1][0])]
        if not positions:
            done.append((coef, word))
            continue
        t = positions[-1] if strategy == "rightmost" else positions[0]
        c = _swap_coefficient(side, word[t], word[t + 1], params)
        prefix_shift = -Weight.of_indices(n, [idx for idx, _ in word[:t]])
        new_pair = ((word[t + 1][0], word[t][1]), (word[t][0], word[t + 1][1]))
        new_word = word[:t] + new_pair + word[t + 2:]
        work.append((coef * c.shifted(prefix_shift), new_word))
    return ExtElement(n, side, done).collect()


def normal_form_element(elt: ExtElement, params: Params,
                        strategy: str = "rightmost") -> ExtElement:
    out = ExtElement.zero(elt.n, elt.side)
    for coef, word in elt.terms:
        nf = normal_form(word, elt.side, params, strategy=strategy)
        out = out + nf.scale(coef)
    return out.collect()


def v_normalized(I: Sequence[int], z: SpectralPoint, params: Params) -> ExtElement:
    """v_I(z) = F_I(zeta)^{-1} v_{i_d}(q^{2(d-1)} z) ... v_{i_1}(z)."""
    I = sorted(I)
    d = len(I)
    letters = [(I[d - 1 - t], z.times_pq(0, 2 * (d - 1 - t))) for t in range(d)]
    f_lower, _ = f_factors(I, params)
    return ExtElement.monomial(params.n, "left", letters, ScalarFn.one() / f_lower)


def w_normalized(I: Sequence[int], z: SpectralPoint, params: Params) -> ExtElement:
    """w^I(z) = F^I(zeta) w^{i_1}(z) w^{i_2}(q^2 z) ... w^{i_d}(q^{2(d-1)} z)."""
    I = sorted(I)
    letters = [(I[t], z.times_pq(0, 2 * t)) for t in range(len(I))]
    _, f_upper = f_factors(I, params)
    return ExtElement.monomial(params.n, "right", letters, f_upper)


def _single_basis_coefficient(elt: ExtElement) -> ScalarFn:
    if not elt.terms:
        return ScalarFn.const(0.0, "0")
    if len(elt.terms) != 1:
        raise RewriteError(f"expected a single basis monomial, got {len(elt.terms)} terms")
    return elt.terms[0][0]


def s_factor(I: Sequence[int], J: Sequence[int], params: Params) -> tuple[ScalarFn, ScalarFn]:
    """(S_l, S_r) extracted by normal-forming products of normalized monomials:

        v_I(q^{2#J} z) v_J(z) = S_l(I, J; zeta) v_{I u J}(z)
        w^I(z) w^J(q^{2#I} z) = S_r(I, J; zeta) w^{I u J}(z)
    """
    z = SpectralPoint.make("s-extract", 1.2337 + 0.41j)
    if set(I) & set(J):
        zero = ScalarFn.const(0.0, "0")
        return zero, zero
    union = sorted(set(I) | set(J))
    f_lower_u, f_upper_u = f_factors(union, params)

    left = normal_form_element(
        v_normalized(I, z.times_pq(0, 2 * len(J)), params) * v_normalized(J, z, params), params)
    s_l = _single_basis_coefficient(left) * f_lower_u

    right = normal_form_element(
        w_normalized(I, z, params) * w_normalized(J, z.times_pq(0, 2 * len(I)), params), params)
    s_r = _single_basis_coefficient(right) / f_upper_u
    return s_l, s_r


def s_l_closed(I: Sequence[int], J: Sequence[int], params: Params) -> ScalarFn:
    """Closed form prod_{i in I, j in J} E(zeta_ji + 1)."""
    pairs = [(j, i) for i in I for j in J]

    def fn(dv: DynVar) -> complex:
        out = 1.0 + 0.0j
        for a, b in pairs:
            out *= e_func(dv.diff(a, b) + 1, params)
        return out

    return ScalarFn(fn, f"Sl{tuple(I)}{tuple(J)}")


def s_r_closed(I: Sequence[int], J: Sequence[int], params: Params) -> ScalarFn:
    """Closed form prod_{i in I, j in J} E(zeta_ij)^{-1}."""
    pairs = [(i, j) for i in I for j in J]

    def fn(dv: DynVar) -> complex:
        out = 1.0 + 0.0j
        for a, b in pairs:
            out /= e_func(dv.diff(a, b), params)
        return out

    return ScalarFn(fn, f"Sr{tuple(I)}{tuple(J)}")


def ext_sn_action(sigma: Sequence[int], elt: ExtElement) -> ExtElement:
    """Relabel generator indices by sigma and precompose coefficients."""
    out = []
    for coef, word in elt.terms:
        new_word = tuple((sigma[idx], sp) for idx, sp in word)
        out.append((coef.permuted(sigma), new_word))
    return ExtElement(elt.n, elt.side, out)


def coaction_extract_minor(I: Sequence[int], J: Sequence[int], z: SpectralPoint,
                           params: Params, side: str = "left"):
    """Coefficient of the basis coline in the coaction image of a normalized monomial.

    Expands the coaction letterwise, normal-forms the exterior leg, and collects
    the coefficient of v_J(z) (resp. w^I(z)) as a formal algebra element.
    Returns the zero element when #I != #J.
    """
    from .algebra import AlgElement

    n = params.n
    I = sorted(I)
    J = sorted(J)
    d = len(I) if side == "left" else len(J)
    if len(I) != len(J):
        return AlgElement.zero(n)
    out = AlgElement.zero(n)
    if side == "left":
        # Delta(v_I(z)): algebra leg e_{i_d m_d}(q^{2(d-1)}z)...e_{i_1 m_1}(z),
        # exterior leg v_{m_d}(q^{2(d-1)}z)...v_{m_1}(z)
        f_lower_I, _ = f_factors(I, params)
        f_lower_J, _ = f_factors(J, params)
        for ms in itertools.product(range(n), repeat=d):
            letters = [(ms[d - 1 - t], z.times_pq(0, 2 * (d - 1 - t))) for t in range(d)]
            nf = normal_form(letters, "left", params)
            if not nf.terms:
                continue
            coef, word = nf.terms[0]
            if [idx for idx, _ in word] != sorted(J, reverse=True):
                continue
            alg_word = tuple((I[d - 1 - t], ms[d - 1 - t], z.times_pq(0, 2 * (d - 1 - t)))
                             for t in range(d))
            term = AlgElement(n, [(ScalarFn.one() / f_lower_I,
                                   coef * f_lower_J, alg_word)])
            out = out + term
        return out
    # right side: Delta(w^J(z)): exterior leg w^{m_1}(z)...w^{m_d}(q^{2(d-1)}z),
    # algebra leg e_{m_1 j_1}(z)...e_{m_d j_d}(q^{2(d-1)}z)
    _, f_upper_J = f_factors(J, params)
    _, f_upper_I = f_factors(I, params)
    for ms in itertools.product(range(n), repeat=d):
        letters = [(ms[t], z.times_pq(0, 2 * t)) for t in range(d)]
        nf = normal_form(letters, "right", params)
        if not nf.terms:
            continue
        coef, word = nf.terms[0]
        if [idx for idx, _ in word] != sorted(I):
            continue
        alg_word = tuple((ms[t], J[t], z.times_pq(0, 2 * t)) for t in range(d))
        term = AlgElement(n, [(coef / f_upper_I, f_upper_J, alg_word)])
        out = out + term
    return out
