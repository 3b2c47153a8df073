"""Verification toolkit for an elliptic dynamical quantum matrix algebra.

The package builds the elliptic dynamical R-matrix for the special linear
rank-n case, the associated quantum matrix algebra with its residual exchange
relations, exterior comodule algebras with their minors and determinant, the
cobraiding pairing, and an antipode on the localization at the determinant.
Every algebraic identity is certified numerically by mapping formal elements
to vector-valued difference operators.

Entry points: run suites through the ``ellq-verify`` command line or via
:func:`ellq.suites.run_suite`.
"""

from .kernels import IMPLEMENTATION
from .numerics import (DhElement, DynVar, Params, ScalarFn, Weight, e_func,
                       sample_dynvar, theta, theta_series_oracle)
from .spectral import SpectralPoint

__version__ = "0.1.0"

__all__ = [
    "IMPLEMENTATION", "Params", "Weight", "DynVar", "ScalarFn", "DhElement",
    "SpectralPoint", "theta", "theta_series_oracle", "e_func", "sample_dynvar",
    "__version__",
]
