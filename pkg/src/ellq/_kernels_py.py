"""Pure-Python theta kernels.

Same API as the compiled twin ``ellq._kernels_c``; the active implementation
is chosen in :mod:`ellq.kernels`.

The basic object is the multiplicative theta function

    theta(z; p) = prod_{j>=0} (1 - z p^j)(1 - p^{j+1}/z),

holomorphic on C* with simple zeros exactly on the lattice {p^k : k in Z}.
Before truncating the product we pull ``z`` into the annulus
[sqrt(p), 1/sqrt(p)) with the quasi-periodicity law

    theta(p^s z) = (-1)^s (p^{s(s-1)/2} z^s)^{-1} theta(z),

so a fixed truncation index works uniformly: with J terms the neglected
factors are 1 + O(p^{J+1/2}), an absolute geometric tail below the requested
tolerance for every normalized argument.
"""

from __future__ import annotations

import cmath
import math

_POW_CACHE: dict[tuple[float, int], list[float]] = {}


def _powers(p: float, jmax: int) -> list[float]:
    key = (p, jmax)
    pw = _POW_CACHE.get(key)
    if pw is None:
        pw = [p**j for j in range(jmax + 1)]
        _POW_CACHE[key] = pw
    return pw


def theta(z: complex, p: float, jmax: int) -> complex:
    """Truncated theta product, argument normalized into [sqrt(p), 1/sqrt(p))."""
    az = abs(z)
    s = round(math.log(az) / math.log(p))
    if s:
        z = z * p ** (-s)
    val = 1.0 + 0.0j
    zi = 1.0 / z
    for pj in _powers(p, jmax):
        val *= (1.0 - z * pj) * (1.0 - p * pj * zi)
    if s:
        val *= (-1.0) ** s * p ** (-0.5 * s * (s - 1)) * z ** (-s)
    return val


def e_func(s: complex, p: float, q: float, jmax: int) -> complex:
    """E(s) = q^s theta(q^{-2s}); odd in s."""
    lq = math.log(q)
    return cmath.exp(s * lq) * theta(cmath.exp(-2.0 * s * lq), p, jmax)


def alpha(l: complex, z: complex, p: float, q: float, jmax: int) -> complex:
    lq = math.log(q)
    q2l = cmath.exp(2.0 * l * lq)
    return (theta(z, p, jmax) * theta(q * q * q2l, p, jmax)
            / (theta(q * q * z, p, jmax) * theta(q2l, p, jmax)))


def beta(l: complex, z: complex, p: float, q: float, jmax: int) -> complex:
    lq = math.log(q)
    qm2l = cmath.exp(-2.0 * l * lq)
    return (theta(q * q, p, jmax) * theta(qm2l * z, p, jmax)
            / (theta(q * q * z, p, jmax) * theta(qm2l, p, jmax)))


def alpha_tilde(l: complex, z: complex, p: float, q: float, jmax: int) -> complex:
    """Regularized alpha: lim_{w->z} theta(q^2 w) alpha(l, w); entire in z."""
    lq = math.log(q)
    q2l = cmath.exp(2.0 * l * lq)
    return theta(z, p, jmax) * theta(q * q * q2l, p, jmax) / theta(q2l, p, jmax)


def beta_tilde(l: complex, z: complex, p: float, q: float, jmax: int) -> complex:
    lq = math.log(q)
    qm2l = cmath.exp(-2.0 * l * lq)
    return theta(q * q, p, jmax) * theta(qm2l * z, p, jmax) / theta(qm2l, p, jmax)
