"""The elliptic dynamical R-matrix and its identity checkers.

Conventions.  On V = C^n with basis e_0, ..., e_{n-1}, the R-matrix acts by

    R(lambda, z)(e_a (x) e_b) = sum_{x,y} entry[(x,y), (a,b)] e_x (x) e_y,

and matrices are stored with the pair (x, y) encoded as row n*x + y (input
pairs as columns).  The nonzero entries are

    1                              a = b = x = y,
    alpha(lambda_xy, z)            a != b, (x, y) = (a, b),
    beta(lambda_xy, z)             a != b, (x, y) = (b, a),

with alpha(l, z) = theta(z) theta(q^{2(l+1)}) / (theta(q^2 z) theta(q^{2l}))
and beta(l, z) = theta(q^2) theta(q^{-2l} z) / (theta(q^2 z) theta(q^{-2l})).
Both have simple poles in z on p^Z q^{-2}; the tilde variants multiply by
theta(q^2 z) and are entire in z.

Structural zeros (pairs with {x,y} != {a,b}) are written as exact zeros.
"""

from __future__ import annotations

import cmath
import math
from typing import Sequence

import numpy as np

from . import kernels
from .numerics import DynVar, Params, PoleError, theta

__all__ = [
    "alpha", "beta", "alpha_tilde", "beta_tilde", "r_matrix", "r_tilde",
    "rt_entry", "flip_matrix", "leg_operator", "qdybe_residual",
    "unitarity_residual", "felder_crosscheck", "theta1", "r_tilde_continuity_residual",
]


def _guard(params: Params, *vals: tuple[complex, str]):
    for v, where in vals:
        if abs(v) <= params.pole_guard:
            raise PoleError(f"denominator {where} within pole guard (|.| = {abs(v):.2e})")


def alpha(l: complex, z: complex, params: Params) -> complex:
    _guard(params,
           (theta(params.q**2 * z, params), f"theta(q^2 z) at z={z}"),
           (theta(params.qpow(2 * l), params), f"theta(q^(2l)) at l={l}"))
    return kernels.alpha(complex(l), complex(z), params.p, params.q, params.jmax)


def beta(l: complex, z: complex, params: Params) -> complex:
    _guard(params,
           (theta(params.q**2 * z, params), f"theta(q^2 z) at z={z}"),
           (theta(params.qpow(-2 * l), params), f"theta(q^(-2l)) at l={l}"))
    return kernels.beta(complex(l), complex(z), params.p, params.q, params.jmax)


def alpha_tilde(l: complex, z: complex, params: Params) -> complex:
    _guard(params, (theta(params.qpow(2 * l), params), f"theta(q^(2l)) at l={l}"))
    return kernels.alpha_tilde(complex(l), complex(z), params.p, params.q, params.jmax)


def beta_tilde(l: complex, z: complex, params: Params) -> complex:
    _guard(params, (theta(params.qpow(-2 * l), params), f"theta(q^(-2l)) at l={l}"))
    return kernels.beta_tilde(complex(l), complex(z), params.p, params.q, params.jmax)


def rt_entry(lam: DynVar, z: complex, out: tuple[int, int], inp: tuple[int, int],
             params: Params) -> complex:
    """Single regularized entry: coefficient of e_out in Rt(lambda, z) e_inp."""
    x, y = out
    a, b = inp
    if a == b == x == y:
        return theta(params.q**2 * z, params)
    if a != b and x == a and y == b:
        return alpha_tilde(lam.diff(x, y), z, params)
    if a != b and x == b and y == a:
        return beta_tilde(lam.diff(x, y), z, params)
    return 0.0 + 0.0j


def r_matrix(lam: DynVar, z: complex, params: Params) -> np.ndarray:
    """Full n^2 x n^2 matrix; poles of alpha/beta guarded."""
    n = params.n
    M = np.zeros((n * n, n * n), dtype=complex)
    for a in range(n):
        for b in range(n):
            col = a * n + b
            if a == b:
                M[col, col] = 1.0
            else:
                M[a * n + b, col] = alpha(lam.diff(a, b), z, params)
                M[b * n + a, col] = beta(lam.diff(b, a), z, params)
    return M


def r_tilde(lam: DynVar, z: complex, params: Params) -> np.ndarray:
    """theta(q^2 z)-regularized matrix, defined for every z != 0."""
    n = params.n
    M = np.zeros((n * n, n * n), dtype=complex)
    for a in range(n):
        for b in range(n):
            col = a * n + b
            if a == b:
                M[col, col] = theta(params.q**2 * z, params)
            else:
                M[a * n + b, col] = alpha_tilde(lam.diff(a, b), z, params)
                M[b * n + a, col] = beta_tilde(lam.diff(b, a), z, params)
    return M


def flip_matrix(n: int) -> np.ndarray:
    P = np.zeros((n * n, n * n))
    for a in range(n):
        for b in range(n):
            P[b * n + a, a * n + b] = 1.0
    return P


def unitarity_residual(lam: DynVar, z: complex, params: Params) -> float:
    """Scaled max-norm of R(lambda,z) R(lambda,1/z)^{(21)} - Id."""
    n = params.n
    P = flip_matrix(n)
    R1 = r_matrix(lam, z, params)
    R2 = P @ r_matrix(lam, 1.0 / z, params) @ P
    prod = R1 @ R2
    scale = max(1.0, float(np.abs(R1).max()), float(np.abs(R2).max()))
    return float(np.abs(prod - np.eye(n * n)).max()) / scale


def leg_operator(lam: DynVar, z: complex, legs: tuple[int, int],
                 shift_leg: int | None, params: Params, nlegs: int = 3) -> np.ndarray:
    """R acting on two legs of V^{(x) nlegs} with the dynamical shift
    lambda - omega(index at shift_leg), dispatched on the (spectator) leg."""
    n = params.n
    N = n**nlegs
    M = np.zeros((N, N), dtype=complex)
    i, j = legs
    for col in range(N):
        a = _decode(col, n, nlegs)
        lam_eff = lam
        if shift_leg is not None:
            deltas = [0.0] * n
            deltas[a[shift_leg]] -= 1.0
            lam_eff = lam.shift_coeffs(deltas)
        R2 = r_matrix(lam_eff, z, params)
        for x in range(n):
            for y in range(n):
                v = R2[x * n + y, a[i] * n + a[j]]
                if v != 0:
                    b = list(a)
                    b[i], b[j] = x, y
                    M[_encode(b, n), col] += v
    return M


def _encode(idx: Sequence[int], n: int) -> int:
    code = 0
    for t in idx:
        code = code * n + t
    return code


def _decode(code: int, n: int, nlegs: int) -> list[int]:
    out = []
    for _ in range(nlegs):
        out.append(code % n)
        code //= n
    return out[::-1]


def qdybe_residual(lam: DynVar, z1: complex, z2: complex, z3: complex,
                   params: Params) -> float:
    """Scaled max-norm of LHS - RHS of the dynamical Yang-Baxter equation on V^(x)3.

    LHS = R^{23}(lam, z2/z3) R^{13}(lam - h^2, z1/z3) R^{12}(lam, z1/z2)
    RHS = R^{12}(lam - h^3, z1/z2) R^{13}(lam, z1/z3) R^{23}(lam - h^1, z2/z3)
    """
    L = (leg_operator(lam, z2 / z3, (1, 2), None, params)
         @ leg_operator(lam, z1 / z3, (0, 2), 1, params)
         @ leg_operator(lam, z1 / z2, (0, 1), None, params))
    R = (leg_operator(lam, z1 / z2, (0, 1), 2, params)
         @ leg_operator(lam, z1 / z3, (0, 2), None, params)
         @ leg_operator(lam, z2 / z3, (1, 2), 0, params))
    scale = max(1.0, float(np.abs(L).max()), float(np.abs(R).max()))
    return float(np.abs(L - R).max()) / scale


# ---------------------------------------------------------------------------
# Additive-convention cross-check


def theta1(x: complex, tau: complex, tol: float = 1e-16) -> complex:
    """First Jacobi theta function by its defining half-integer series.

    theta1(x; tau) = - sum_{j in Z + 1/2} e^{pi i j^2 tau + 2 pi i j (x + 1/2)},
    convergent for Im(tau) > 0.
    """
    if tau.imag <= 0:
        raise PoleError("theta1 series requires Im(tau) > 0")
    total = 0.0 + 0.0j
    j = 0.5
    while True:
        t_plus = cmath.exp(1j * math.pi * j * j * tau + 2j * math.pi * j * (x + 0.5))
        t_minus = cmath.exp(1j * math.pi * j * j * tau - 2j * math.pi * j * (x + 0.5))
        total += t_plus + t_minus
        if j > 3 and abs(t_plus) + abs(t_minus) <= tol * max(1.0, abs(total)):
            break
        j += 1.0
        if j > 400:
            raise PoleError("theta1 series did not converge")
    return -total


def _alpha1(l: complex, x: complex, tau: complex, gam: complex) -> complex:
    return (theta1(x, tau) * theta1(l + gam, tau)
            / (theta1(x - gam, tau) * theta1(l, tau)))


def _beta1(l: complex, x: complex, tau: complex, gam: complex) -> complex:
    return (-theta1(x + l, tau) * theta1(gam, tau)
            / (theta1(x - gam, tau) * theta1(l, tau)))


def felder_crosscheck(lam: DynVar, x: complex, params: Params) -> float:
    """Max entry difference between R(lambda, e^{2 pi i x}) and the additive-
    convention matrix built from theta1 under lambda -> gamma*lambda, x -> -x,
    tau -> tau/2, where p = e^{pi i tau}, q = e^{pi i gamma}."""
    n = params.n
    tau = -1j * math.log(params.p) / math.pi
    gam = -1j * math.log(params.q) / math.pi
    z = cmath.exp(2j * math.pi * x)
    R = r_matrix(lam, z, params)
    M = np.zeros_like(R)
    for a in range(n):
        for b in range(n):
            col = a * n + b
            if a == b:
                M[col, col] = 1.0
            else:
                M[a * n + b, col] = _alpha1(gam * lam.diff(a, b), -x, tau / 2, gam)
                M[b * n + a, col] = _beta1(gam * lam.diff(b, a), -x, tau / 2, gam)
    scale = max(1.0, float(np.abs(R).max()))
    return float(np.abs(M - R).max()) / scale


def r_tilde_continuity_residual(lam: DynVar, k: int, params: Params,
                                eps: float = 1e-10) -> float:
    """Two-sided approach of r_tilde at the former pole z* = p^k q^{-2}.

    The regularized entries are entire in z, so the approach error is pure
    smoothness, linear in eps, with no cancellation amplification.
    """
    zstar = params.p**k * params.q**-2
    Ma = r_tilde(lam, zstar * (1 + eps), params)
    Mb = r_tilde(lam, zstar * (1 - eps), params)
    scale = max(1.0, float(np.abs(Ma).max()))
    return float(np.abs(Ma - Mb).max()) / scale


def residual_limit_residual(l: complex, k: int, params: Params,
                            eps: float = 1e-6) -> float:
    """Closed-form limits of the regularized coefficients at z -> p^{-k} q^{-2}:

        phi(z) alpha(l, z) -> alpha(l, p^k q^2),
        phi(z) beta(l, z)  -> -beta(-l, p^k q^2),

    with phi(z) = q^{-1} theta(q^2 z) / (q theta(q^{-2} z)).  Verified by a
    Richardson-extrapolated approach (the product is holomorphic at the
    target, so the extrapolation error is O(eps^2))."""
    zstar = params.p ** (-k) * params.q ** (-2)
    ztarget = params.p**k * params.q**2

    def phi(w: complex) -> complex:
        return theta(params.q**2 * w, params) / (params.q**2 * theta(w / params.q**2, params))

    def pair(w: complex) -> tuple[complex, complex]:
        # deliberately inside the pole guard: the phi factor cancels the pole
        a = kernels.alpha(complex(l), complex(w), params.p, params.q, params.jmax)
        b = kernels.beta(complex(l), complex(w), params.p, params.q, params.jmax)
        return phi(w) * a, phi(w) * b

    a1, b1 = pair(zstar * (1 + eps))
    a2, b2 = pair(zstar * (1 + eps / 2))
    a_lim, b_lim = 2 * a2 - a1, 2 * b2 - b1
    ta = alpha(l, ztarget, params)
    tb = -beta(-l, ztarget, params)
    return max(abs(a_lim - ta) / max(1.0, abs(ta)), abs(b_lim - tb) / max(1.0, abs(tb)))
