"""Elliptic kernel, dynamical-variable sampling, and the difference-operator algebra.

Everything downstream reduces statements about formal algebra elements to
numerical identities between scalar functions of a dynamical variable
``lambda`` (a point of the weight space) and finite sums of shifted
multiplication operators ``sum_i f_i T_{mu_i}``.  This module provides:

* ``Params``      -- the global configuration (moduli p, q, rank n, tolerances),
* ``Weight``      -- integer weights, normalized modulo the diagonal
                     (the weight lattice of traceless diagonal matrices, so
                     omega(1) + ... + omega(n) = 0),
* ``DynVar``      -- a sampled dynamical variable; all formulas depend only
                     on coordinate differences,
* ``ScalarFn``    -- black-box evaluable coefficient functions,
* ``DhElement``   -- finite sums  sum_i f_i T_{mu_i}  with the composition
                     law (f T_mu)(g T_nu) = f (T_mu g) T_{mu+nu},
* theta / E kernels and the independent triple-product series oracle.

Equality of functions and operators is decided probabilistically on
pole-guarded random sample points; the moduli are assumed generic
(p^a q^b = 1 only for a = b = 0), which is a configuration assumption and is
not checked.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels

__all__ = [
    "EllqError", "DomainError", "PoleError", "ConfigError", "CalibrationError",
    "LimitError", "RewriteError", "ExpansionError", "LemmaError",
    "Params", "Weight", "DynVar", "ScalarFn", "DhElement",
    "theta", "theta_series_oracle", "e_func",
    "sample_dynvar", "sample_spectral", "dh_compose", "rel_err", "table_residual",
]


class EllqError(Exception):
    """Base class for all package errors."""


class DomainError(EllqError):
    pass


class PoleError(EllqError):
    pass


class ConfigError(EllqError):
    pass


class CalibrationError(EllqError):
    pass


class LimitError(EllqError):
    pass


class RewriteError(EllqError):
    pass


class ExpansionError(EllqError):
    pass


class LemmaError(EllqError):
    pass


@dataclass(frozen=True)
class Params:
    """Global moduli and verification tolerances.

    The defaults p = 0.31, q = 0.43 give log q / log p irrational-looking;
    genericity (p^a q^b = 1 => a = b = 0) is assumed, not proven.
    """

    p: float = 0.31
    q: float = 0.43
    n: int = 2
    theta_tol: float = 1e-16
    eq_tol: float = 1e-8
    samples: int = 8
    pole_guard: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.p < 1.0 and 0.0 < self.q < 1.0):
            raise ConfigError(f"moduli must satisfy 0 < p, q < 1, got p={self.p}, q={self.q}")
        if self.n < 1:
            raise ConfigError(f"rank must be positive, got n={self.n}")
        if self.theta_tol <= 0 or self.eq_tol <= 0 or self.pole_guard <= 0:
            raise ConfigError("tolerances must be positive")
        if self.samples < 1:
            raise ConfigError("sample count must be positive")

    @property
    def jmax(self) -> int:
        """Truncation index for the theta product: tail below theta_tol."""
        return math.ceil(math.log(self.theta_tol) / math.log(self.p))

    def rng(self, *stream: int) -> np.random.Generator:
        """Deterministic per-task RNG stream derived from the seed."""
        return np.random.default_rng([self.seed, *stream])

    def qpow(self, s: complex) -> complex:
        return cmath.exp(complex(s) * math.log(self.q))


def theta(z: complex, params: Params) -> complex:
    """Normalized theta function; zero set {p^k : k in Z}."""
    if z == 0:
        raise DomainError("theta is undefined at z = 0")
    return kernels.theta(complex(z), params.p, params.jmax)


def theta_series_oracle(z: complex, params: Params) -> complex:
    """Independent oracle: bilateral triple-product series divided by prod(1-p^j).

    Kept deliberately separate from the product kernel (including the compiled
    one) so the two routes share no code.
    """
    if z == 0:
        raise DomainError("theta series is undefined at z = 0")
    p = params.p
    denom = 1.0
    pj = p
    while pj > 1e-20:
        denom *= 1.0 - pj
        pj *= p
    total = 0.0 + 0.0j
    for direction in (1, -1):
        k = 0 if direction == 1 else -1
        while True:
            term = (-z) ** k * p ** (k * (k - 1) / 2)
            total += term
            if abs(k) > 2 and abs(term) <= params.theta_tol * max(1.0, abs(total)):
                break
            if abs(k) > 600:
                break
            k += direction
    return total / denom


def e_func(s: complex, params: Params) -> complex:
    """E(s) = q^s theta(q^{-2s}); odd, vanishing on s with q^{-2s} in p^Z."""
    return kernels.e_func(complex(s), params.p, params.q, params.jmax)


@dataclass(frozen=True)
class Weight:
    """Integer weight modulo the diagonal, so sum of all unit weights is zero.

    Coefficients are normalized by subtracting the minimum entry; composition
    of shifts stays integer-exact.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        m = min(self.coeffs)
        if m != 0:
            object.__setattr__(self, "coeffs", tuple(c - m for c in self.coeffs))

    @staticmethod
    def zero(n: int) -> "Weight":
        return Weight((0,) * n)

    @staticmethod
    def unit(n: int, i: int) -> "Weight":
        return Weight(tuple(1 if k == i else 0 for k in range(n)))

    @staticmethod
    def of_indices(n: int, indices: Iterable[int]) -> "Weight":
        c = [0] * n
        for i in indices:
            c[i] += 1
        return Weight(tuple(c))

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coeffs))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


@dataclass(frozen=True)
class DynVar:
    """A dynamical variable: n complex coordinates, meaningful up to a common constant."""

    coords: tuple[complex, ...]

    @property
    def n(self) -> int:
        return len(self.coords)

    def diff(self, i: int, j: int) -> complex:
        return self.coords[i] - self.coords[j]

    def shift(self, w: Weight) -> "DynVar":
        return DynVar(tuple(c + k for c, k in zip(self.coords, w.coeffs)))

    def shift_coeffs(self, deltas: Sequence[complex]) -> "DynVar":
        return DynVar(tuple(c + d for c, d in zip(self.coords, deltas)))

    def permute(self, sigma: Sequence[int]) -> "DynVar":
        """Precompose coordinates with the permutation: new_k = old_{sigma(k)}."""
        return DynVar(tuple(self.coords[sigma[k]] for k in range(self.n)))

    def negate(self) -> "DynVar":
        return DynVar(tuple(-c for c in self.coords))

    def plus_const(self, c: complex) -> "DynVar":
        return DynVar(tuple(x + c for x in self.coords))


def sample_dynvar(params: Params, rng: np.random.Generator,
                  guard_shifts: Sequence[int] = (0,)) -> DynVar:
    """Draw lambda with Re in [-2,2], Im in [-0.5,0.5] per coordinate.

    Resamples until |theta(q^{+-2(lambda_ij + s)})| > pole_guard for all i != j
    and s in guard_shifts; the default (0,) is the bare non-degeneracy guard,
    callers whose formulas shift lambda_ij by integers pass a wider window.
    """
    n = params.n
    for _ in range(1000):
        coords = tuple(complex(rng.uniform(-2, 2), rng.uniform(-0.5, 0.5)) for _ in range(n))
        dv = DynVar(coords)
        ok = True
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                d = dv.diff(i, j)
                for s in guard_shifts:
                    if abs(theta(params.qpow(2 * (d + s)), params)) <= params.pole_guard:
                        ok = False
                        break
                    if abs(theta(params.qpow(-2 * (d + s)), params)) <= params.pole_guard:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            return dv
    raise ConfigError("sample_dynvar exhausted 1000 attempts; pole_guard too large")


def sample_spectral(rng: np.random.Generator, lo: float = 0.5, hi: float = 2.0) -> complex:
    """Random spectral value on the annulus lo < |z| < hi."""
    return rng.uniform(lo, hi) * cmath.exp(1j * rng.uniform(0.0, 2.0 * math.pi))


def guarded_dynvars(params: Params, rng, count: int | None = None,
                    wide: bool = True) -> list[DynVar]:
    """Sample points for probabilistic equality checks.

    ``wide`` widens the pole guard to integer shifts up to n+1, which keeps
    the E-function products appearing in minor prefactors away from zeros.
    """
    count = params.samples if count is None else count
    shifts = range(-(params.n + 1), params.n + 2) if wide else (0,)
    return [sample_dynvar(params, rng, guard_shifts=tuple(shifts)) for _ in range(count)]


@dataclass(frozen=True)
class ScalarFn:
    """A black-box evaluable coefficient function of one dynamical variable."""

    fn: Callable[[DynVar], complex]
    tag: str = ""

    def __call__(self, dv: DynVar) -> complex:
        return self.fn(dv)

    @staticmethod
    def const(c: complex, tag: str = "") -> "ScalarFn":
        return ScalarFn(lambda dv, c=c: c, tag or f"const({c})")

    @staticmethod
    def one() -> "ScalarFn":
        return ScalarFn(lambda dv: 1.0 + 0.0j, "1")

    def _coerce(self, other) -> "ScalarFn":
        return other if isinstance(other, ScalarFn) else ScalarFn.const(other)

    def __add__(self, other) -> "ScalarFn":
        g = self._coerce(other)
        return ScalarFn(lambda dv, f=self.fn, g=g.fn: f(dv) + g(dv), f"({self.tag}+{g.tag})")

    def __mul__(self, other) -> "ScalarFn":
        g = self._coerce(other)
        return ScalarFn(lambda dv, f=self.fn, g=g.fn: f(dv) * g(dv), f"({self.tag}*{g.tag})")

    def __truediv__(self, other) -> "ScalarFn":
        g = self._coerce(other)
        return ScalarFn(lambda dv, f=self.fn, g=g.fn: f(dv) / g(dv), f"({self.tag}/{g.tag})")

    def __neg__(self) -> "ScalarFn":
        return ScalarFn(lambda dv, f=self.fn: -f(dv), f"(-{self.tag})")

    def shifted(self, w: Weight) -> "ScalarFn":
        """T_w f: dv -> f(dv + w)."""
        if w.is_zero:
            return self
        return ScalarFn(lambda dv, f=self.fn, w=w: f(dv.shift(w)), f"T{w.coeffs}{self.tag}")

    def permuted(self, sigma: Sequence[int]) -> "ScalarFn":
        sig = tuple(sigma)
        return ScalarFn(lambda dv, f=self.fn, s=sig: f(dv.permute(s)), f"perm{sig}{self.tag}")

    def neg_arg(self) -> "ScalarFn":
        return ScalarFn(lambda dv, f=self.fn: f(dv.negate()), f"negarg({self.tag})")


def rel_err(x: complex, y: complex) -> float:
    return abs(x - y) / max(1.0, abs(x), abs(y))


def table_residual(ta: dict, tb: dict) -> float:
    """Scaled max difference between two shift->value tables (values: scalars or arrays)."""
    err = 0.0
    scale = 1.0
    for key in set(ta) | set(tb):
        va, vb = ta.get(key), tb.get(key)
        if va is None:
            va = np.zeros_like(vb)
        if vb is None:
            vb = np.zeros_like(va)
        err = max(err, float(np.max(np.abs(np.asarray(va) - np.asarray(vb)))))
        scale = max(scale, float(np.max(np.abs(np.asarray(va)))), float(np.max(np.abs(np.asarray(vb)))))
    return err / scale


@dataclass
class DhElement:
    """A finite sum  sum_i f_i T_{mu_i}  of shifted multiplication operators."""

    n: int
    terms: list[tuple[ScalarFn, Weight]] = field(default_factory=list)

    @staticmethod
    def zero(n: int) -> "DhElement":
        return DhElement(n, [])

    @staticmethod
    def identity(n: int) -> "DhElement":
        return DhElement(n, [(ScalarFn.one(), Weight.zero(n))])

    @staticmethod
    def shift(n: int, w: Weight) -> "DhElement":
        return DhElement(n, [(ScalarFn.one(), w)])

    @staticmethod
    def of(f: ScalarFn, w: Weight, n: int) -> "DhElement":
        return DhElement(n, [(f, w)])

    def __add__(self, other: "DhElement") -> "DhElement":
        return DhElement(self.n, self.terms + other.terms)

    def __neg__(self) -> "DhElement":
        return DhElement(self.n, [(-f, w) for f, w in self.terms])

    def __sub__(self, other: "DhElement") -> "DhElement":
        return self + (-other)

    def scale(self, c: complex) -> "DhElement":
        return DhElement(self.n, [(f * c, w) for f, w in self.terms])

    def merged(self) -> "DhElement":
        acc: dict[Weight, ScalarFn] = {}
        for f, w in self.terms:
            acc[w] = acc[w] + f if w in acc else f
        return DhElement(self.n, list((f, w) for w, f in acc.items()))

    def table(self, dv: DynVar) -> dict[tuple[int, ...], complex]:
        acc: dict[tuple[int, ...], complex] = {}
        for f, w in self.terms:
            key = w.coeffs
            acc[key] = acc.get(key, 0.0) + f(dv)
        return acc

    def apply_to_one(self, dv: DynVar) -> complex:
        """Apply the operator to the constant function 1."""
        return sum((f(dv) for f, _ in self.terms), 0.0 + 0.0j)


def dh_compose(a: DhElement, b: DhElement) -> DhElement:
    """(f T_mu)(g T_nu) = f (T_mu g) T_{mu+nu}, extended bilinearly."""
    out: list[tuple[ScalarFn, Weight]] = []
    for f, mu in a.terms:
        for g, nu in b.terms:
            out.append((f * g.shifted(mu), mu + nu))
    return DhElement(a.n, out)


def dh_residual(a: DhElement, b: DhElement, dynvars: Sequence[DynVar]) -> float:
    return max(table_residual(a.table(dv), b.table(dv)) for dv in dynvars)
