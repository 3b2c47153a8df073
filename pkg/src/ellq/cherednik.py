"""Operators on V^(x)n attached to braid-monoid words.

The generator s_i is sent to the regularized two-leg R-matrix acting at legs
(i, i+1) with the dynamical variable shifted by the weights carried on legs
i+2, ..., n (spectator legs, so input and output dispatch agree), at spectral
argument z_i / z_{i+1}.  Words compose through the twisted product

    C_{b1 b2}(lambda, z) = C_{b1}(lambda, z) . pi(b1)(C_{b2}(lambda, z)),

where a permutation acts on operator-valued functions by

    sigma(F)(z) = P_sigma F(sigma z) P_sigma^{-1},     (sigma z)_k = z_{sigma(k)},

and P_sigma permutes tensor factors (slot sigma(k) receives slot k).  The
well-definedness on rewriting classes is a consequence of the Yang-Baxter
equation and is exercised by the tests rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .braid import BraidWord, build_td, compose_perm, project_sn
from .exterior import f_factors, sign_factors
from .numerics import DynVar, Params
from .rmatrix import rt_entry, alpha_tilde, _encode, _decode

__all__ = [
    "LegOperator", "che_generator", "che_word", "cherednik_operator",
    "perm_matrix", "cherednik_corner", "corner_product_formula",
    "sign_identity_residual",
]


def perm_matrix(n: int, sigma: Sequence[int], nlegs: int) -> np.ndarray:
    """P_sigma on V^(x)nlegs: content of slot k moves to slot sigma(k)."""
    N = n**nlegs
    P = np.zeros((N, N))
    for col in range(N):
        a = _decode(col, n, nlegs)
        b = [0] * nlegs
        for k in range(nlegs):
            b[sigma[k]] = a[k]
        P[_encode(b, n), col] = 1.0
    return P


def _generator_matrix(i: int, lam: DynVar, zs: Sequence[complex], params: Params) -> np.ndarray:
    """Matrix of the letter s_i (1-based) on V^(x)n at fixed (lambda, z)."""
    n = params.n
    N = n**n
    leg = i - 1
    M = np.zeros((N, N), dtype=complex)
    z = zs[leg] / zs[leg + 1]
    for col in range(N):
        a = _decode(col, n, n)
        deltas = [0.0] * n
        for j in range(leg + 2, n):
            deltas[a[j]] -= 1.0
        lam_eff = lam.shift_coeffs(deltas)
        for x in range(n):
            for y in range(n):
                v = rt_entry(lam_eff, z, (x, y), (a[leg], a[leg + 1]), params)
                if v != 0:
                    b = list(a)
                    b[leg], b[leg + 1] = x, y
                    M[_encode(b, n), col] += v
    return M


@dataclass(frozen=True)
class LegOperator:
    """Operator-valued function (lambda, z-vector) -> matrix on V^(x)n."""

    params: Params
    word: BraidWord

    def eval(self, lam: DynVar, zs: Sequence[complex]) -> np.ndarray:
        n = self.params.n
        N = n**n
        C = np.eye(N, dtype=complex)
        sigma = tuple(range(n))
        for letter in self.word:
            zs_perm = [zs[sigma[k]] for k in range(n)]
            F = _generator_matrix(letter, lam, zs_perm, self.params)
            P = perm_matrix(n, sigma, n)
            C = C @ (P @ F @ P.T)
            swap = list(range(n))
            swap[letter - 1], swap[letter] = swap[letter], swap[letter - 1]
            sigma = compose_perm(sigma, tuple(swap))
        return C

    def permutation(self) -> tuple[int, ...]:
        return project_sn(self.word, self.params.n)


def che_generator(i: int, params: Params) -> LegOperator:
    if not (1 <= i <= params.n - 1):
        raise ValueError(f"generator index must be in [1, n-1], got {i}")
    return LegOperator(params, (i,))


def che_word(word: BraidWord, params: Params) -> LegOperator:
    return LegOperator(params, tuple(word))


def cherednik_operator(params: Params) -> LegOperator:
    return che_word(build_td(params.n), params)


def cherednik_corner(lam: DynVar, zs: Sequence[complex], params: Params) -> complex:
    """Matrix element (0,...,n-1) -> (0,...,n-1) of the full ladder operator."""
    n = params.n
    idx = _encode(range(n), n)
    return cherednik_operator(params).eval(lam, zs)[idx, idx]


def corner_product_formula(lam: DynVar, zs: Sequence[complex], params: Params) -> complex:
    """Closed form prod_{i<j} alpha_tilde(lambda_ij, z_i/z_j)."""
    prod = 1.0 + 0.0j
    for i in range(params.n):
        for j in range(i + 1, params.n):
            prod *= alpha_tilde(lam.diff(i, j), zs[i] / zs[j], params)
    return prod


def corner_f_ratio_formula(lam: DynVar, zs: Sequence[complex], params: Params) -> complex:
    """Equivalent closed form prod_{i<j} q theta(z_i/z_j) * F_[1,n](lam)/F^[1,n](lam)."""
    from .numerics import theta

    n = params.n
    prod = 1.0 + 0.0j
    for i in range(n):
        for j in range(i + 1, n):
            prod *= params.q * theta(zs[i] / zs[j], params)
    f_lower, f_upper = f_factors(tuple(range(n)), params)
    return prod * f_lower(lam) / f_upper(lam)


def sign_identity_residual(sigma: Sequence[int], tau: Sequence[int], lam: DynVar,
                           z0: complex, params: Params) -> float:
    """On the geometric grid w = (z0, q^2 z0, ...), the matrix element
    (rows sigma, columns tau) of the ladder operator equals
    sgn_[1,n](sigma; lambda) / sgn^[1,n](tau; lambda) times the corner element."""
    n = params.n
    ws = [params.q ** (2 * k) * z0 for k in range(n)]
    C = cherednik_operator(params).eval(lam, ws)
    full = tuple(range(n))
    row = _encode([sigma[k] for k in range(n)], n)
    col = _encode([tau[k] for k in range(n)], n)
    corner = C[_encode(full, n), _encode(full, n)]
    sgn_lo, _ = sign_factors(full, {k: sigma[k] for k in range(n)}, params)
    _, sgn_up = sign_factors(full, {k: tau[k] for k in range(n)}, params)
    predicted = sgn_lo(lam) / sgn_up(lam) * corner
    actual = C[row, col]
    return abs(actual - predicted) / max(1.0, abs(actual), abs(predicted))
