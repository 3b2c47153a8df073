"""Spectral parameters with exact p/q exponent bookkeeping.

A point is base * p^pexp * q^qexp with the base tracked as an opaque symbol
carrying a numeric value.  Ratios of points with the same base are classified
exactly through exponent differences; points with different bases are generic
by assumption (no p^Z q^{+-2} relation), which is what the residual-relation
and annihilation rules rely on.  Floating-point ratio detection is never used.
"""

from __future__ import annotations

from dataclasses import dataclass

from .numerics import Params

__all__ = ["SpectralPoint"]


@dataclass(frozen=True)
class SpectralPoint:
    base_id: str
    base_val: complex
    pexp: int = 0
    qexp: int = 0

    @staticmethod
    def make(label: str, value: complex) -> "SpectralPoint":
        return SpectralPoint(label, complex(value))

    def value(self, params: Params) -> complex:
        return self.base_val * params.p**self.pexp * params.q**self.qexp

    def times_pq(self, dp: int, dq: int) -> "SpectralPoint":
        return SpectralPoint(self.base_id, self.base_val, self.pexp + dp, self.qexp + dq)

    def inverse(self) -> "SpectralPoint":
        """Reciprocal point; the inverted base gets its own symbol."""
        if self.base_id.startswith("inv:"):
            base = self.base_id[4:]
        else:
            base = f"inv:{self.base_id}"
        return SpectralPoint(base, 1.0 / self.base_val, -self.pexp, -self.qexp)

    def ratio_exponents(self, other: "SpectralPoint") -> tuple[int, int] | None:
        """(a, b) with self/other = p^a q^b when decidable, else None (generic)."""
        if self.base_id != other.base_id:
            return None
        return self.pexp - other.pexp, self.qexp - other.qexp

    def key(self) -> tuple[str, int, int]:
        return (self.base_id, self.pexp, self.qexp)

    def perturbed(self, eps: float) -> "SpectralPoint":
        """Base nudged by a relative eps; used for removable-singularity limits."""
        return SpectralPoint(f"{self.base_id}~{eps:g}", self.base_val * (1.0 + eps),
                             self.pexp, self.qexp)
