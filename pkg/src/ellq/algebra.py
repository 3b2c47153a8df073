"""Formal-word layer for the elliptic quantum matrix algebra.

An element is a finite sum of terms

    f(lambda) g(rho) . e_{i_1 j_1}(z_1) ... e_{i_m j_m}(z_m),

with both coefficient factors kept to the left of the word.  The moment
relations

    f(lambda) e_{ij}(z) = e_{ij}(z) f(lambda + omega(i)),
    f(rho)    e_{ij}(z) = e_{ij}(z) f(rho + omega(j)),

are built into multiplication: a coefficient crossing a word from the right
to the left picks up the shift by minus the word's row (resp. column) weight.

No normal form for the algebra is attempted (none exists in closed form);
equality of elements is decided exclusively through evaluation
representations, see :mod:`ellq.evalrep`.  A passing check is strong
probabilistic evidence, not a proof: faithfulness of finite tensor powers of
the evaluation representation is not asserted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .exterior import f_factors, s_r_closed, sign_factors
from .numerics import DhElement, DynVar, Params, ScalarFn, Weight
from .rmatrix import alpha, beta
from .spectral import SpectralPoint

__all__ = [
    "Letter", "Word", "AlgElement", "coproduct_pairs", "counit",
    "rll_relation", "left_minor", "right_minor", "determinant",
    "sn_action", "t_map", "antipode_image", "wll_pair",
]

Letter = tuple[int, int, SpectralPoint]
Word = tuple[Letter, ...]


def row_weight(word: Word, n: int) -> Weight:
    return Weight.of_indices(n, [i for i, _, _ in word])


def col_weight(word: Word, n: int) -> Weight:
    return Weight.of_indices(n, [j for _, j, _ in word])


def spectral_degree(word: Word) -> tuple:
    return tuple(sorted(sp.key() for _, _, sp in word))


@dataclass
class AlgElement:
    """Finite sum of (lambda-coefficient, rho-coefficient, word) terms."""

    n: int
    terms: list[tuple[ScalarFn, ScalarFn, Word]] = field(default_factory=list)

    @staticmethod
    def zero(n: int) -> "AlgElement":
        return AlgElement(n, [])

    @staticmethod
    def unit(n: int) -> "AlgElement":
        return AlgElement(n, [(ScalarFn.one(), ScalarFn.one(), ())])

    @staticmethod
    def generator(n: int, i: int, j: int, sp: SpectralPoint) -> "AlgElement":
        return AlgElement(n, [(ScalarFn.one(), ScalarFn.one(), ((i, j, sp),))])

    def __add__(self, other: "AlgElement") -> "AlgElement":
        return AlgElement(self.n, self.terms + other.terms)

    def __neg__(self) -> "AlgElement":
        return AlgElement(self.n, [(-fl, fr, w) for fl, fr, w in self.terms])

    def __sub__(self, other: "AlgElement") -> "AlgElement":
        return self + (-other)

    def __mul__(self, other: "AlgElement") -> "AlgElement":
        out = []
        for fl1, fr1, w1 in self.terms:
            srow = -row_weight(w1, self.n)
            scol = -col_weight(w1, self.n)
            for fl2, fr2, w2 in other.terms:
                out.append((fl1 * fl2.shifted(srow), fr1 * fr2.shifted(scol), w1 + w2))
        return AlgElement(self.n, out)

    def scale_l(self, f: ScalarFn) -> "AlgElement":
        return AlgElement(self.n, [(f * fl, fr, w) for fl, fr, w in self.terms])

    def scale_r(self, f: ScalarFn) -> "AlgElement":
        return AlgElement(self.n, [(fl, f * fr, w) for fl, fr, w in self.terms])

    def scale(self, c: complex) -> "AlgElement":
        return AlgElement(self.n, [(fl * c, fr, w) for fl, fr, w in self.terms])

    def bidegree(self) -> tuple[Weight, Weight] | None:
        """Common (row, column) weight of all words, or None for inhomogeneous sums."""
        degs = {(row_weight(w, self.n), col_weight(w, self.n)) for _, _, w in self.terms}
        if len(degs) > 1:
            return None
        return degs.pop() if degs else (Weight.zero(self.n), Weight.zero(self.n))

    def spectral_degrees(self) -> set[tuple]:
        return {spectral_degree(w) for _, _, w in self.terms}


def coproduct_pairs(a: AlgElement) -> list[tuple[AlgElement, AlgElement]]:
    """Letterwise coproduct, expanded distributively.

    Each generator splits as e_{ij}(z) -> sum_x e_{ix}(z) (x) e_{xj}(z); the
    lambda-coefficient stays on the first leg, the rho-coefficient moves to
    the second.
    """
    n = a.n
    out: list[tuple[AlgElement, AlgElement]] = []
    for fl, fr, word in a.terms:
        m = len(word)
        for mids in itertools.product(range(n), repeat=m):
            w1 = tuple((word[t][0], mids[t], word[t][2]) for t in range(m))
            w2 = tuple((mids[t], word[t][1], word[t][2]) for t in range(m))
            out.append((AlgElement(n, [(fl, ScalarFn.one(), w1)]),
                        AlgElement(n, [(ScalarFn.one(), fr, w2)])))
    return out


def counit(a: AlgElement, params: Params) -> DhElement:
    """Multiplicative extension of e_{ij}(z) -> delta_ij T_{-omega(i)}.

    Both coefficient slots collapse onto the same variable.
    """
    n = a.n
    out = DhElement.zero(n)
    for fl, fr, word in a.terms:
        if any(i != j for i, j, _ in word):
            continue
        shift = -row_weight(word, n)
        out = out + DhElement.of(fl * fr, shift, n)
    return out.merged()


# ---------------------------------------------------------------------------
# Defining relations


def _coeff_lambda(fn, tag: str) -> ScalarFn:
    return ScalarFn(fn, tag)


def rll_relation(a: int, b: int, c: int, d: int, z1: SpectralPoint, z2: SpectralPoint,
                 params: Params) -> AlgElement:
    """LHS - RHS of the exchange relation for the index pattern (a, b, c, d).

    Generic spectral ratio:

        sum_{xy} R_out(a,c),in(x,y)(lambda, z1/z2) e_{xb}(z1) e_{yd}(z2)
      - sum_{xy} R_out(x,y),in(b,d)(rho,    z1/z2) e_{cy}(z2) e_{ax}(z1).

    When z1/z2 lies on the pole lattice p^Z q^{-2} (decided exactly), the
    relation is multiplied by the regularizing factor and the limit is taken
    in closed form, which sends diagonal entries to zero, alpha-entries to
    alpha(., p^k q^2) and beta(l, .)-entries to -beta(-l, p^k q^2) where
    z2 = p^k q^2 z1.  This emits the residual relation for a != c, b != d and
    the degenerate two-term relations when a = c or b = d, a single total rule
    covering every ratio class.
    """
    n = params.n
    ratio = z1.ratio_exponents(z2)
    residual = ratio is not None and ratio[1] == -2
    out = AlgElement.zero(n)

    if not residual:
        r = None if ratio is None else ratio  # exact when same base
        rv = z1.value(params) / z2.value(params)

        def coeff_alpha(i: int, j: int) -> ScalarFn:
            return _coeff_lambda(lambda dv, i=i, j=j: alpha(dv.diff(i, j), rv, params),
                                 f"alpha({i}{j})")

        def coeff_beta(i: int, j: int) -> ScalarFn:
            return _coeff_lambda(lambda dv, i=i, j=j: beta(dv.diff(i, j), rv, params),
                                 f"beta({i}{j})")

        diag = ScalarFn.one()
    else:
        k = -ratio[0]  # z2 = p^k q^2 z1
        zres = params.p**k * params.q**2

        def coeff_alpha(i: int, j: int) -> ScalarFn:
            return _coeff_lambda(lambda dv, i=i, j=j: alpha(dv.diff(i, j), zres, params),
                                 f"alpha_res({i}{j})")

        def coeff_beta(i: int, j: int) -> ScalarFn:
            return _coeff_lambda(lambda dv, i=i, j=j: -beta(dv.diff(j, i), zres, params),
                                 f"beta_res({i}{j})")

        diag = None  # regularizing factor vanishes on the diagonal entries

    # left side: coefficients are functions of lambda
    for x in range(n):
        for y in range(n):
            word = ((x, b, z1), (y, d, z2))
            if a == c == x == y:
                if diag is not None:
                    out = out + AlgElement(n, [(diag, ScalarFn.one(), word)])
            elif x != y and (x, y) == (a, c):
                out = out + AlgElement(n, [(coeff_alpha(a, c), ScalarFn.one(), word)])
            elif x != y and (x, y) == (c, a):
                out = out + AlgElement(n, [(coeff_beta(a, c), ScalarFn.one(), word)])
    # right side: coefficients are functions of rho
    for x in range(n):
        for y in range(n):
            word = ((c, y, z2), (a, x, z1))
            if b == d == x == y:
                if diag is not None:
                    out = out - AlgElement(n, [(ScalarFn.one(), diag, word)])
            elif x != y and (x, y) == (b, d):
                out = out - AlgElement(n, [(ScalarFn.one(), coeff_alpha(b, d), word)])
            elif x != y and (x, y) == (d, b):
                out = out - AlgElement(n, [(ScalarFn.one(), coeff_beta(d, b), word)])
    return out


def all_relation_instances(params: Params, z1: SpectralPoint, z2: SpectralPoint) \
        -> list[tuple[str, AlgElement]]:
    """Every index pattern at the given spectral pair, labelled for reports."""
    out = []
    for a in range(params.n):
        for b in range(params.n):
            for c in range(params.n):
                for d in range(params.n):
                    out.append((f"rll[{a}{b}{c}{d}]", rll_relation(a, b, c, d, z1, z2, params)))
    return out


# ---------------------------------------------------------------------------
# Minors and the determinant


def _perm_map(I: Sequence[int], images: Sequence[int]) -> dict[int, int]:
    return dict(zip(sorted(I), images))


def left_minor(I: Sequence[int], J: Sequence[int], sigma: Sequence[int],
               z: SpectralPoint, params: Params) -> AlgElement:
    """Row-ordered minor: sum over column permutations, descending spectral ladder.

    ``sigma`` lists the images of sorted(I) under a permutation of I; the
    result is independent of this choice (verified in the evaluation
    representation, not assumed).
    """
    n = params.n
    I, J = sorted(I), sorted(J)
    if len(I) != len(J):
        return AlgElement.zero(n)
    d = len(I)
    smap = _perm_map(I, sigma)
    f_lower_I, _ = f_factors(I, params)
    f_lower_J, _ = f_factors(J, params)
    sgn_I_lo, _ = sign_factors(I, smap, params)
    out = AlgElement.zero(n)
    for images in itertools.permutations(J):
        tmap = _perm_map(J, images)
        sgn_J_lo, _ = sign_factors(J, tmap, params)
        word = tuple((smap[I[d - 1 - t]], tmap[J[d - 1 - t]], z.times_pq(0, 2 * (d - 1 - t)))
                     for t in range(d))
        fl = ScalarFn.one() / (f_lower_I * sgn_I_lo)
        fr = f_lower_J * sgn_J_lo
        out = out + AlgElement(n, [(fl, fr, word)])
    return out


def right_minor(I: Sequence[int], J: Sequence[int], tau: Sequence[int],
                z: SpectralPoint, params: Params) -> AlgElement:
    """Column-ordered minor: sum over row permutations, ascending spectral ladder."""
    n = params.n
    I, J = sorted(I), sorted(J)
    if len(I) != len(J):
        return AlgElement.zero(n)
    d = len(I)
    tmap = _perm_map(J, tau)
    _, f_upper_I = f_factors(I, params)
    _, f_upper_J = f_factors(J, params)
    _, sgn_J_up = sign_factors(J, tmap, params)
    out = AlgElement.zero(n)
    for images in itertools.permutations(I):
        smap = _perm_map(I, images)
        _, sgn_I_up = sign_factors(I, smap, params)
        word = tuple((smap[I[t]], tmap[J[t]], z.times_pq(0, 2 * t)) for t in range(d))
        fl = ScalarFn.one() / (f_upper_I * sgn_I_up)
        fr = f_upper_J * sgn_J_up
        out = out + AlgElement(n, [(fl, fr, word)])
    return out


def determinant(z: SpectralPoint, params: Params) -> AlgElement:
    """The top minor: bidegree (0, 0), spectral ladder z, q^2 z, ..., q^{2(n-1)} z."""
    full = list(range(params.n))
    return right_minor(full, full, full, z, params)


# ---------------------------------------------------------------------------
# Symmetry action, transpose-inverse map, antipode


def sn_action(sigma: Sequence[int], tau: Sequence[int], a: AlgElement) -> AlgElement:
    """Relabel rows by sigma, columns by tau, precompose the coefficients."""
    out = []
    for fl, fr, word in a.terms:
        new_word = tuple((sigma[i], tau[j], sp) for i, j, sp in word)
        out.append((fl.permuted(sigma), fr.permuted(tau), new_word))
    return AlgElement(a.n, out)


def t_map(a: AlgElement) -> AlgElement:
    """Anti-automorphism: reverse words, invert spectral points, negate both
    dynamical variables in the coefficients."""
    n = a.n
    out = AlgElement.zero(n)
    for fl, fr, word in a.terms:
        rev = tuple((i, j, sp.inverse()) for i, j, sp in reversed(word))
        word_elt = AlgElement(n, [(ScalarFn.one(), ScalarFn.one(), rev)])
        coef_elt = AlgElement(n, [(fl.neg_arg(), fr.neg_arg(), ())])
        out = out + word_elt * coef_elt
    return out


def antipode_image(i: int, j: int, z: SpectralPoint, params: Params) \
        -> tuple[AlgElement, SpectralPoint]:
    """Numerator of the antipode of a generator plus the point whose determinant
    inverse multiplies it:

        S(e_ij(z)) = det(q^{-2(n-1)} z)^{-1} * numerator,
        numerator  = S_r(jc, {j}; lambda) / S_r(ic, {i}; rho)
                     * minor_{jc}^{ic}(q^{-2(n-1)} z),

    where ic, jc are the complements of i and j.  Consumers compose with
    pointwise operator inversion of the represented determinant.
    """
    n = params.n
    det_point = z.times_pq(0, -2 * (n - 1))
    ic = [x for x in range(n) if x != i]
    jc = [x for x in range(n) if x != j]
    minor = right_minor(jc, ic, sorted(ic), det_point, params)
    num = minor.scale_l(s_r_closed(jc, [j], params))
    num = num.scale_r(ScalarFn.one() / s_r_closed(ic, [i], params))
    return num, det_point


# ---------------------------------------------------------------------------
# Extended exchange relation through braid-word operators


def wll_pair(d: int, row: Sequence[int], col: Sequence[int],
             zpoints: Sequence[SpectralPoint], params: Params) \
        -> tuple[AlgElement, AlgElement]:
    """Matrix element (row <- col) of both sides of the braid-extended exchange
    relation on V^(x)n with d active legs:

      LHS = sum_x  C_{t_d}(lambda, z)[row, x] . e_{x_1 col_1}(z_1)...e_{x_d col_d}(z_d)
      RHS = sum_y  e_{row_d y_d}(z_d)...e_{row_1 y_1}(z_1)
                   . C_{t_d}(rho + h^{<= d}, z)[y, col]

    The dynamical shift on the right resolves to the (common) weight of the
    first d column indices.  Spectator legs must carry equal row/column
    indices; both sides are zero otherwise.
    """
    from .braid import build_td
    from .cherednik import che_word
    from .rmatrix import _encode

    n = params.n
    if len(row) != n or len(col) != n:
        raise ValueError("row/col must list all n leg indices")
    if any(row[t] != col[t] for t in range(d, n)):
        return AlgElement.zero(n), AlgElement.zero(n)
    op = che_word(build_td(d), params)
    zvals = [zp.value(params) for zp in zpoints] + [1.0] * (n - d)

    cache: dict[tuple, "object"] = {}

    def c_matrix(dv: DynVar):
        key = dv.coords
        if key not in cache:
            cache[key] = op.eval(dv, zvals)
        return cache[key]

    lhs = AlgElement.zero(n)
    for xs in itertools.product(range(n), repeat=d):
        x_full = list(xs) + list(row[d:])
        r_idx, x_idx = _encode(row, n), _encode(x_full, n)

        def coeff(dv: DynVar, r=r_idx, x=x_idx):
            return c_matrix(dv)[r, x]

        word = tuple((xs[t], col[t], zpoints[t]) for t in range(d))
        lhs = lhs + AlgElement(n, [(ScalarFn(coeff, "C_lam"), ScalarFn.one(), word)])

    shift = Weight.of_indices(n, col[:d])
    rhs = AlgElement.zero(n)
    for ys in itertools.product(range(n), repeat=d):
        y_full = list(ys) + list(col[d:])
        y_idx, c_idx = _encode(y_full, n), _encode(col, n)

        def coeff(dv: DynVar, y=y_idx, c=c_idx, s=shift):
            return c_matrix(dv.shift(s))[y, c]

        word = tuple((row[t], ys[t], zpoints[t]) for t in reversed(range(d)))
        rhs = rhs + AlgElement(n, [(ScalarFn.one(), ScalarFn(coeff, "C_rho"), word)])
    return lhs, rhs
