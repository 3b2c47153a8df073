"""The cobraiding pairing, regularized (primed) limits, and its identities.

Generator pairing:

    < e_ij(z), e_kl(w) > = Rt[out (i,k), in (j,l)](zeta, z/w) T_{-omega(i)-omega(k)},

extended to words through the coproduct rules

    < ab, c >  = sum < a, c' >  T_{wL(c'')} < b, c'' >,
    < a, bc >  = sum < a'', b > T_{wL(a'')} < a', c >,
    < a, 1 > = < 1, a > = eps(a),

and to coefficients by the moment rules (left coefficients of the first slot
in rho and of the second slot in lambda compose on the left; the remaining two
compose on the right after shifting by the word's weight).

Unitarity with respect to phi(z) = theta(q^2 z):

    phihat(a,b) phihat(b,a) eps(ab)
        = sum_{(a),(b)} < b', a' > T_{mid} < a'', b'' >,

with mid the sum of the middle coproduct weights of the two factors.  The
mixed slot order (b-component first in the first factor) is the arrangement
under which the sum telescopes to the two-sided inverse of the R-matrix; it
is also the arrangement in which the identity is consumed downstream.

Primed pairings divide out the known zero locus and take the limit by
Richardson extrapolation from two spectral perturbations, certified by
agreement of two independent scales; disagreement raises LimitError (either a
numerics problem or a falsified vanishing statement).
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .algebra import (AlgElement, Letter, Word, col_weight, counit, determinant,
                      left_minor, row_weight)
from .numerics import (DhElement, DynVar, ExpansionError, LimitError, Params,
                       ScalarFn, Weight, dh_compose, dh_residual, theta)
from .rmatrix import rt_entry
from .spectral import SpectralPoint

__all__ = [
    "pair_generators", "pair_words", "phi_hat", "unitary_residual",
    "primed_pair", "det_pair_prime_value", "cobraiding_identity_sides",
    "key_identity_sides", "PAIR_LENGTH_CAP",
]

PAIR_LENGTH_CAP = 12


def pair_generators(i: int, j: int, zsp: SpectralPoint, k: int, l: int,
                    wsp: SpectralPoint, params: Params) -> DhElement:
    n = params.n
    arg = zsp.value(params) / wsp.value(params)

    def fn(dv: DynVar, arg=arg, i=i, j=j, k=k, l=l):
        return rt_entry(dv, arg, (i, k), (j, l), params)

    shift = -(Weight.unit(n, i) + Weight.unit(n, k))
    return DhElement.of(ScalarFn(fn, f"<e{i}{j},e{k}{l}>"), shift, n)


def _eps_word(word: Word, n: int) -> DhElement:
    if any(i != j for i, j, _ in word):
        return DhElement.zero(n)
    return DhElement.shift(n, -row_weight(word, n))


def _pair_pure(wa: Word, wb: Word, params: Params) -> DhElement:
    n = params.n
    if not wa:
        return _eps_word(wb, n)
    if not wb:
        return _eps_word(wa, n)
    if len(wa) == 1 and len(wb) == 1:
        (i, j, z), (k, l, w) = wa[0], wb[0]
        return pair_generators(i, j, z, k, l, w, params)
    if len(wa) >= 2:
        head, rest = wa[:1], wa[1:]
        total = DhElement.zero(n)
        for mids in itertools.product(range(n), repeat=len(wb)):
            cp = tuple((wb[t][0], mids[t], wb[t][2]) for t in range(len(wb)))
            cpp = tuple((mids[t], wb[t][1], wb[t][2]) for t in range(len(wb)))
            beta = Weight.of_indices(n, mids)
            left = _pair_pure(head, cp, params)
            right = _pair_pure(rest, cpp, params)
            total = total + dh_compose(dh_compose(left, DhElement.shift(n, beta)), right)
        return total
    (i, j, z) = wa[0]
    head, rest = wb[:1], wb[1:]
    total = DhElement.zero(n)
    for x in range(n):
        left = _pair_pure(((x, j, z),), head, params)
        right = _pair_pure(((i, x, z),), rest, params)
        total = total + dh_compose(dh_compose(left, DhElement.shift(n, Weight.unit(n, x))), right)
    return total


def pair_words(a: AlgElement, b: AlgElement, params: Params) -> DhElement:
    """Full pairing of two elements, coefficients included."""
    n = params.n
    out = DhElement.zero(n)
    for fl_a, fr_a, wa in a.terms:
        for fl_b, fr_b, wb in b.terms:
            if len(wa) * max(1, len(wb)) > PAIR_LENGTH_CAP:
                raise ExpansionError(
                    f"pairing expansion cap exceeded: {len(wa)} x {len(wb)} words")
            base = _pair_pure(wa, wb, params)
            pre = DhElement.of(fr_a * fl_b, Weight.zero(n), n)
            post = DhElement.of(fl_a.shifted(row_weight(wa, n))
                                * fr_b.shifted(col_weight(wb, n)), Weight.zero(n), n)
            out = out + dh_compose(dh_compose(pre, base), post)
    return out.merged()


def spectral_values(a: AlgElement, params: Params) -> list[complex]:
    vals = {spd: None for spd in a.spectral_degrees()}
    if len(vals) != 1:
        raise ValueError("element is not spectrally homogeneous")
    (spd,) = vals
    out = []
    for _, _, word in a.terms[:1]:
        out = [sp.value(params) for _, _, sp in word]
    return out


def phi_hat(a: AlgElement, b: AlgElement, params: Params) -> complex:
    """prod theta(q^2 z_i / w_j) over the two spectral degrees."""
    out = 1.0 + 0.0j
    for z in spectral_values(a, params):
        for w in spectral_values(b, params):
            out *= theta(params.q**2 * z / w, params)
    return out


def _word_splits(word: Word, n: int):
    """Coproduct paths of a pure word: (first leg, second leg, middle weight)."""
    m = len(word)
    for mids in itertools.product(range(n), repeat=m):
        w1 = tuple((word[t][0], mids[t], word[t][2]) for t in range(m))
        w2 = tuple((mids[t], word[t][1], word[t][2]) for t in range(m))
        yield w1, w2, Weight.of_indices(n, mids)


def unitary_residual(a: AlgElement, b: AlgElement, params: Params,
                     dynvars: Sequence[DynVar]) -> float:
    """Residual of the phi-unitarity identity for pure-word elements."""
    n = params.n
    total = DhElement.zero(n)
    for _, _, wa in a.terms:
        for _, _, wb in b.terms:
            for a1, a2, wma in _word_splits(wa, n):
                for b1, b2, wmb in _word_splits(wb, n):
                    first = _pair_pure(b1, a1, params)
                    second = _pair_pure(a2, b2, params)
                    total = total + dh_compose(
                        dh_compose(first, DhElement.shift(n, wma + wmb)), second)
    rhs = counit(a * b, params).scale(phi_hat(a, b, params) * phi_hat(b, a, params))
    return dh_residual(total.merged(), rhs, dynvars)


# ---------------------------------------------------------------------------
# Primed (regularized) pairings


def _theta_product_divisor(kind: str, zval: complex, wval: complex, params: Params) -> complex:
    if kind == "minor-gen":
        return theta(zval / wval, params)
    if kind == "gen-minor":
        return theta(params.q**2 * wval / zval, params)
    if kind == "det-gen":
        out = 1.0 + 0.0j
        for m in range(params.n - 1):
            out *= theta(params.q ** (2 * m) * wval / zval, params)
        return out
    raise ValueError(f"unknown primed-pair kind {kind!r}")


def _raw_pair(kind: str, I, J, i, j, zsp: SpectralPoint, wsp: SpectralPoint,
              params: Params) -> DhElement:
    if kind == "minor-gen":
        minor = left_minor(I, J, sorted(I), wsp, params)
        return pair_words(minor, AlgElement.generator(params.n, i, j, zsp), params)
    if kind == "gen-minor":
        minor = left_minor(I, J, sorted(I), wsp, params)
        return pair_words(AlgElement.generator(params.n, i, j, zsp), minor, params)
    if kind == "det-gen":
        det = determinant(wsp, params)
        return pair_words(det, AlgElement.generator(params.n, i, j, zsp), params)
    raise ValueError(f"unknown primed-pair kind {kind!r}")


def _pair_over_divisor(kind: str, I, J, i, j, zsp: SpectralPoint, wsp: SpectralPoint,
                       eps: float, params: Params) -> DhElement:
    zp = zsp.perturbed(eps)
    div = _theta_product_divisor(kind, zp.value(params), wsp.value(params), params)
    return _raw_pair(kind, I, J, i, j, zp, wsp, params).scale(1.0 / div)


def _richardson(kind: str, I, J, i, j, zsp, wsp, eps: float, params: Params) -> DhElement:
    a = _pair_over_divisor(kind, I, J, i, j, zsp, wsp, eps, params)
    b = _pair_over_divisor(kind, I, J, i, j, zsp, wsp, eps / 2, params)
    return (b.scale(2.0) + a.scale(-1.0)).merged()


def primed_pair(kind: str, I, J, i: int, j: int, zsp: SpectralPoint, wsp: SpectralPoint,
                params: Params, dynvars: Sequence[DynVar],
                eps_pair: tuple[float, float] = (1e-4, 1e-5)) -> DhElement:
    """Limit of the pairing divided by its vanishing theta product.

    Evaluated at two perturbation scales (each Richardson-extrapolated); the
    smaller-scale value is returned once the two agree within 10 * eq_tol.
    """
    eps1, eps2 = eps_pair
    v1 = _richardson(kind, I, J, i, j, zsp, wsp, eps1, params)
    v2 = _richardson(kind, I, J, i, j, zsp, wsp, eps2, params)
    res = dh_residual(v1, v2, dynvars)
    if res > 10 * params.eq_tol:
        raise LimitError(f"primed pairing limit did not certify (two-scale residual {res:.2e})")
    return v2


def det_pair_prime_value(wsp: SpectralPoint, zsp: SpectralPoint, i: int, j: int,
                         params: Params, dynvars: Sequence[DynVar]) -> list[complex]:
    """< det(w), e_ij(z) >' applied to the constant function 1, per sample point."""
    dh = primed_pair("det-gen", None, None, i, j, zsp, wsp, params, dynvars)
    return [dh.apply_to_one(dv) for dv in dynvars]


# ---------------------------------------------------------------------------
# Identities consumed by the determinant-centrality argument


def _mu_l(fn: ScalarFn, elt: AlgElement) -> AlgElement:
    return elt.scale_l(fn)


def _mu_r(fn: ScalarFn, elt: AlgElement) -> AlgElement:
    return elt.scale_r(fn)


def cobraiding_identity_sides(i: int, j: int, k: int, l: int, zsp: SpectralPoint,
                              wsp: SpectralPoint, params: Params) \
        -> tuple[AlgElement, AlgElement]:
    """Degree-one instance of the compatibility identity:

        sum mu_l(<a', b'> 1) a'' b'' = sum mu_r(<a'', b''> 1) b' a'
    for a = e_ij(z), b = e_kl(w)."""
    n = params.n
    lhs = AlgElement.zero(n)
    rhs = AlgElement.zero(n)
    for x in range(n):
        for y in range(n):
            if sorted((i, k)) == sorted((x, y)):
                dh = pair_generators(i, x, zsp, k, y, wsp, params)
                coeff = ScalarFn(lambda dv, dh=dh: dh.apply_to_one(dv), "mu_l")
                word = AlgElement(n, [(ScalarFn.one(), ScalarFn.one(),
                                       ((x, j, zsp), (y, l, wsp)))])
                lhs = lhs + _mu_l(coeff, word)
            if sorted((j, l)) == sorted((x, y)):
                dh = pair_generators(x, j, zsp, y, l, wsp, params)
                coeff = ScalarFn(lambda dv, dh=dh: dh.apply_to_one(dv), "mu_r")
                word = AlgElement(n, [(ScalarFn.one(), ScalarFn.one(),
                                       ((k, y, wsp), (i, x, zsp)))])
                rhs = rhs + _mu_r(coeff, word)
    return lhs, rhs


def key_identity_sides(i: int, j: int, I, J, zsp: SpectralPoint, wsp: SpectralPoint,
                       params: Params, dynvars: Sequence[DynVar]) \
        -> tuple[AlgElement, AlgElement]:
    """Primed compatibility identity threaded through quadratic minors:

      psi sum_{x,X} mu_l(<minor_I^X(w), e_ix(z)>' 1) minor_X^J(w) e_xj(z)
        = psi sum_{x,X} mu_r(<minor_X^J(w), e_xj(z)>' 1) e_ix(z) minor_I^X(w).
    """
    n = params.n
    zval, wval = zsp.value(params), wsp.value(params)
    psi = theta(params.q**2 * zval / wval, params) * theta(params.q**4 * wval / zval, params)
    wI = Weight.of_indices(n, I)
    wJ = Weight.of_indices(n, J)
    lhs = AlgElement.zero(n)
    rhs = AlgElement.zero(n)
    for x in range(n):
        for X in itertools.combinations(range(n), len(I)):
            wX = Weight.of_indices(n, X)
            if wI + Weight.unit(n, i) == wX + Weight.unit(n, x):
                dh = primed_pair("minor-gen", I, X, i, x, zsp, wsp, params, dynvars)
                coeff = ScalarFn(lambda dv, dh=dh: dh.apply_to_one(dv), "mu_l'")
                elt = left_minor(X, J, sorted(X), wsp, params) \
                    * AlgElement.generator(n, x, j, zsp)
                lhs = lhs + _mu_l(coeff, elt)
            if wX + Weight.unit(n, x) == wJ + Weight.unit(n, j):
                dh = primed_pair("minor-gen", X, J, x, j, zsp, wsp, params, dynvars)
                coeff = ScalarFn(lambda dv, dh=dh: dh.apply_to_one(dv), "mu_r'")
                elt = AlgElement.generator(n, i, x, zsp) \
                    * left_minor(I, X, sorted(I), wsp, params)
                rhs = rhs + _mu_r(coeff, elt)
    return lhs.scale(psi), rhs.scale(psi)
