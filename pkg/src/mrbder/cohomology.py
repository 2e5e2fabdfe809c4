"""The cochain complex of a pair with bimodule coefficients.

Degree-n cochains come in three layers:

* plain Hochschild cochains  C^n = Hom(A^n, M)
* operator cochains          OC^n = C^n + C^{n-1}   (n >= 2; OC^1 = C^1)
* pair cochains              PC^n = OC^n x OC^{n-1} (n >= 2; PC^1 = C^1)

The differentials (all squaring to zero):

* ``hochschild_delta``: the Hochschild coboundary, normalized so that the
  degree-n map carries a global sign (-1)^{n+1} relative to the classical one:

      (d f)(a_1..a_{n+1}) = (-1)^{n+1} l(a_1, f(a_2..a_{n+1}))
                            + r(f(a_1..a_n), a_{n+1})
                            + sum_{i=1..n} (-1)^{i+n+1} f(.., mu(a_i,a_{i+1}), ..)

* ``modified_delta``: the same coboundary taken over the induced
  multiplication mu_R(a,b) = mu(Ra,b)+mu(a,Rb) with the induced actions
  l~(a,m) = l(Ra,m) - R_M l(a,m), r~(m,a) = r(m,Ra) - R_M r(m,a).  Shipped
  twice: a direct transcription and the composition through the induced
  structures; tests assert they agree everywhere.

* ``operator_map`` (phi): the degree-preserving chain map comparing the two
  Hochschild complexes.  For each nonempty subset S of the n slots let f_S be
  f with R applied in every slot outside S.  Then

      phi(f) = f . R^{(x n)}
               - sum_{|S| odd}  (-kappa)^{(|S|-1)/2} R_M(f_S)
               + sum_{|S| even} (-kappa)^{|S|/2} f_S

  The even-|S| coefficient is fixed by the calibration harness in
  tools/calibrate_phi.py (see docs/phi_calibration.md): it is the unique
  convention among the candidate family making phi a chain map and killing
  phi(mu) on adjoint coefficients.

* ``derivation_defect`` (Delta): Delta(f) = sum_j f.(Id x..x d x..x Id) - d_M . f,
  the failure of f to commute with the derivation.

* ``operator_delta``: OC^n -> OC^{n+1}, (f, g) |-> (delta f, -modified_delta g - phi f)
* ``pair_delta``: PC^n -> PC^{n+1}, adding the derivation defect with the sign
  (-1)^n on the bottom layer.

Cohomology is computed from RREF rank/kernel data with canonical (RREF)
representatives.  The Lie-side complex (Chevalley-Eilenberg of the commutator
bracket) and the skew-symmetrization chain maps live here too.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .fields import Field
from .linalg import (Matrix, MultiTensor, ShapeError, TensorSpace, _index_tuples,
                     operator_matrix, rank_and_kernel, rref_vectors)
from .structures import Algebra, Bimodule, MRBDerPair, unit_vector
from .constructions import LiePair

MAX_MATRIX_DEGREE = 4
MAX_COHOMOLOGY_DEGREE = 3


class DegreeCapExceeded(ValueError):
    """Requested degree beyond the supported range."""


def _sign_is_plus(k: int) -> bool:
    # true when (-1)^k = +1
    return k % 2 == 0


def _vacc(F, acc, vec, plus: bool):
    if plus:
        for t, v in enumerate(vec):
            if not F.is_zero(v):
                acc[t] = F.add(acc[t], v)
    else:
        for t, v in enumerate(vec):
            if not F.is_zero(v):
                acc[t] = F.sub(acc[t], v)


def _act_left(F, left, i, vec):
    """l(e_i, vec) for a codomain vector ``vec``."""
    m = left.cod
    acc = [F.zero] * m
    for s, c in enumerate(vec):
        if F.is_zero(c):
            continue
        w = left.value_at(i, s)
        for t in range(m):
            if not F.is_zero(w[t]):
                acc[t] = F.add(acc[t], F.mul(c, w[t]))
    return acc


def _act_right(F, right, vec, j):
    m = right.cod
    acc = [F.zero] * m
    for s, c in enumerate(vec):
        if F.is_zero(c):
            continue
        w = right.value_at(s, j)
        for t in range(m):
            if not F.is_zero(w[t]):
                acc[t] = F.add(acc[t], F.mul(c, w[t]))
    return acc


def _eval_slot_vec(F, f, rest, pos, vec):
    """f on basis indices ``rest`` with a coordinate vector spliced in at ``pos``."""
    m = f.cod
    acc = [F.zero] * m
    for s, c in enumerate(vec):
        if F.is_zero(c):
            continue
        w = f.value_at(*rest[:pos], s, *rest[pos:])
        for t in range(m):
            if not F.is_zero(w[t]):
                acc[t] = F.add(acc[t], F.mul(c, w[t]))
    return acc


def _check_cochain_shape(pair: MRBDerPair, bim: Bimodule, f: MultiTensor):
    n, m = pair.dim, bim.dim_m
    if f.dims != (n,) * f.arity or f.cod != m:
        raise ShapeError("cochain must map A^%d -> M" % f.arity)
    if f.arity < 1:
        raise ShapeError("cochain degree must be >= 1")


def _hochschild_delta_core(F, nA, mu, left, right, f) -> MultiTensor:
    n = f.arity
    m = f.cod
    if f.is_zero():
        return MultiTensor.zeros(F, (nA,) * (n + 1), m)
    first_plus = _sign_is_plus(n + 1)
    out = []
    for idx in _index_tuples((nA,) * (n + 1)):
        acc = [F.zero] * m
        _vacc(F, acc, _act_left(F, left, idx[0], f.value_at(*idx[1:])), first_plus)
        _vacc(F, acc, _act_right(F, right, f.value_at(*idx[:n]), idx[n]), True)
        for i in range(1, n + 1):
            vec = mu.value_at(idx[i - 1], idx[i])
            rest = idx[:i - 1] + idx[i + 1:]
            term = _eval_slot_vec(F, f, rest, i - 1, vec)
            _vacc(F, acc, term, _sign_is_plus(i + n + 1))
        out.extend(acc)
    return MultiTensor(F, (nA,) * (n + 1), m, tuple(out))


def hochschild_delta(pair: MRBDerPair, bim: Bimodule, f: MultiTensor) -> MultiTensor:
    """Hochschild coboundary C^n -> C^{n+1} with bimodule coefficients."""
    _check_cochain_shape(pair, bim, f)
    return _hochschild_delta_core(pair.field, pair.dim, pair.mu, bim.left, bim.right, f)


def induced_mu(pair: MRBDerPair) -> MultiTensor:
    return pair.mu.precompose_slot(0, pair.R) + pair.mu.precompose_slot(1, pair.R)


def induced_actions(pair: MRBDerPair, bim: Bimodule) -> tuple:
    lt = bim.left.precompose_slot(0, pair.R) - bim.left.postcompose(bim.R_M)
    rt = bim.right.precompose_slot(1, pair.R) - bim.right.postcompose(bim.R_M)
    return lt, rt


def modified_delta(pair: MRBDerPair, bim: Bimodule, f: MultiTensor) -> MultiTensor:
    """Coboundary over the induced multiplication and actions, written out
    directly:

        (d_R f)(a_1..a_{n+1}) =
            (-1)^{n+1} [ l(R a_1, f(..)) - R_M l(a_1, f(..)) ]
            + r(f(..), R a_{n+1}) - R_M r(f(..), a_{n+1})
            + sum_i (-1)^{i+n+1} f(.., mu(R a_i, a_{i+1}) + mu(a_i, R a_{i+1}), ..)
    """
    _check_cochain_shape(pair, bim, f)
    F, nA = pair.field, pair.dim
    n, m = f.arity, f.cod
    if f.is_zero():
        return MultiTensor.zeros(F, (nA,) * (n + 1), m)
    mu_r = induced_mu(pair)
    lR = bim.left.precompose_slot(0, pair.R)
    rR = bim.right.precompose_slot(1, pair.R)
    R_M = bim.R_M
    first_plus = _sign_is_plus(n + 1)
    out = []
    for idx in _index_tuples((nA,) * (n + 1)):
        acc = [F.zero] * m
        fv = f.value_at(*idx[1:])
        _vacc(F, acc, _act_left(F, lR, idx[0], fv), first_plus)
        _vacc(F, acc, R_M.apply(_act_left(F, bim.left, idx[0], fv)), not first_plus)
        fv = f.value_at(*idx[:n])
        _vacc(F, acc, _act_right(F, rR, fv, idx[n]), True)
        _vacc(F, acc, R_M.apply(_act_right(F, bim.right, fv, idx[n])), False)
        for i in range(1, n + 1):
            vec = mu_r.value_at(idx[i - 1], idx[i])
            rest = idx[:i - 1] + idx[i + 1:]
            term = _eval_slot_vec(F, f, rest, i - 1, vec)
            _vacc(F, acc, term, _sign_is_plus(i + n + 1))
        out.extend(acc)
    return MultiTensor(F, (nA,) * (n + 1), m, tuple(out))


def modified_delta_via_induced(pair: MRBDerPair, bim: Bimodule, f: MultiTensor) -> MultiTensor:
    """Same map computed through the induced structures; cross-check twin of
    :func:`modified_delta`."""
    _check_cochain_shape(pair, bim, f)
    lt, rt = induced_actions(pair, bim)
    return _hochschild_delta_core(pair.field, pair.dim, induced_mu(pair), lt, rt, f)


@dataclass(frozen=True)
class OperatorMapConvention:
    """Coefficient convention for the even-|S| terms of ``operator_map``.

    even exponent on (-kappa) is |S|/2 + even_shift; even_sign flips the term;
    even_rm applies R_M to it.  The default is the calibrated winner."""

    even_shift: int = 0
    even_sign: int = 1
    even_rm: bool = False


DEFAULT_CONVENTION = OperatorMapConvention()


def convention_candidates() -> list:
    return [OperatorMapConvention(sh, sg, rm)
            for sh in (1, 0, -1) for sg in (-1, 1) for rm in (True, False)]


def _operator_map_core(F, R: Matrix, R_M: Matrix, kappa, f: MultiTensor,
                       convention: OperatorMapConvention) -> MultiTensor:
    n = f.arity
    if f.is_zero():
        return MultiTensor.zeros(F, f.dims, f.cod)
    full = (1 << n) - 1
    # g[mask] = f with R fed into every slot of mask
    g = [None] * (full + 1)
    g[0] = f
    for mask in range(1, full + 1):
        low = (mask & -mask).bit_length() - 1
        g[mask] = g[mask & (mask - 1)].precompose_slot(low, R)
    neg_kappa = F.neg(kappa)
    acc = g[full]
    for bare in range(1, full + 1):
        r = bare.bit_count()
        t = g[full ^ bare]
        if r % 2 == 1:
            coeff = F.neg(F.pow(neg_kappa, (r - 1) // 2))
            term = t.postcompose(R_M).scale(coeff)
        else:
            e = r // 2 + convention.even_shift
            if e < 0:
                raise ValueError("convention exponent went negative")
            coeff = F.pow(neg_kappa, e)
            if convention.even_sign < 0:
                coeff = F.neg(coeff)
            term = (t.postcompose(R_M) if convention.even_rm else t).scale(coeff)
        acc = acc + term
    return acc


def operator_map(pair: MRBDerPair, bim: Bimodule, f: MultiTensor,
                 convention: OperatorMapConvention = DEFAULT_CONVENTION) -> MultiTensor:
    """The chain map phi: C^n -> C^n built from (R, R_M, kappa)."""
    _check_cochain_shape(pair, bim, f)
    return _operator_map_core(pair.field, pair.R, bim.R_M, pair.kappa, f, convention)


def _derivation_defect_core(F, d: Matrix, d_M: Matrix, f: MultiTensor) -> MultiTensor:
    if f.is_zero():
        return MultiTensor.zeros(F, f.dims, f.cod)
    acc = -(f.postcompose(d_M))
    for j in range(f.arity):
        acc = acc + f.precompose_slot(j, d)
    return acc


def derivation_defect(pair: MRBDerPair, bim: Bimodule, f: MultiTensor) -> MultiTensor:
    """Delta(f) = sum_j f(.., d(.), ..) - d_M . f."""
    _check_cochain_shape(pair, bim, f)
    return _derivation_defect_core(pair.field, pair.d, bim.d_M, f)


# ---------------------------------------------------------------------------
# cochain containers


@dataclass(frozen=True)
class OperatorCochain:
    """Element of OC^n = C^n + C^{n-1}; ``g`` is None exactly in degree 1."""

    degree: int
    f: MultiTensor
    g: MultiTensor | None

    def __post_init__(self):
        if self.degree < 1:
            raise ShapeError("degree must be >= 1")
        if self.f.arity != self.degree:
            raise ShapeError("top component must have arity %d" % self.degree)
        if self.degree == 1:
            if self.g is not None:
                raise ShapeError("degree-1 operator cochain has no second component")
        else:
            if self.g is None or self.g.arity != self.degree - 1:
                raise ShapeError("second component must have arity %d" % (self.degree - 1))

    def __add__(self, other):
        self._match(other)
        g = None if self.g is None else self.g + other.g
        return OperatorCochain(self.degree, self.f + other.f, g)

    def __sub__(self, other):
        self._match(other)
        g = None if self.g is None else self.g - other.g
        return OperatorCochain(self.degree, self.f - other.f, g)

    def __neg__(self):
        return OperatorCochain(self.degree, -self.f, None if self.g is None else -self.g)

    def scale(self, c):
        return OperatorCochain(self.degree, self.f.scale(c),
                               None if self.g is None else self.g.scale(c))

    def is_zero(self) -> bool:
        return self.f.is_zero() and (self.g is None or self.g.is_zero())

    def _match(self, other):
        if self.degree != other.degree:
            raise ShapeError("operator cochain degrees differ")


@dataclass(frozen=True)
class PairCochain:
    """Element of PC^n = OC^n x OC^{n-1}; ``bottom`` is None exactly in degree 1."""

    degree: int
    top: OperatorCochain
    bottom: OperatorCochain | None

    def __post_init__(self):
        if self.top.degree != self.degree:
            raise ShapeError("top layer must have degree %d" % self.degree)
        if self.degree == 1:
            if self.bottom is not None:
                raise ShapeError("degree-1 pair cochain has no bottom layer")
        else:
            if self.bottom is None or self.bottom.degree != self.degree - 1:
                raise ShapeError("bottom layer must have degree %d" % (self.degree - 1))

    def __add__(self, other):
        if self.degree != other.degree:
            raise ShapeError("pair cochain degrees differ")
        bot = None if self.bottom is None else self.bottom + other.bottom
        return PairCochain(self.degree, self.top + other.top, bot)

    def __sub__(self, other):
        if self.degree != other.degree:
            raise ShapeError("pair cochain degrees differ")
        bot = None if self.bottom is None else self.bottom - other.bottom
        return PairCochain(self.degree, self.top - other.top, bot)

    def __neg__(self):
        return PairCochain(self.degree, -self.top, None if self.bottom is None else -self.bottom)

    def scale(self, c):
        return PairCochain(self.degree, self.top.scale(c),
                           None if self.bottom is None else self.bottom.scale(c))

    def is_zero(self) -> bool:
        return self.top.is_zero() and (self.bottom is None or self.bottom.is_zero())


def one_cochain(f: MultiTensor) -> PairCochain:
    """Wrap f in PC^1."""
    return PairCochain(1, OperatorCochain(1, f, None), None)


def two_cochain(f2: MultiTensor, g1: MultiTensor, h1: MultiTensor) -> PairCochain:
    """Wrap the triple (f2, g1, h1) in PC^2 = (C^2 + C^1) x C^1."""
    return PairCochain(2, OperatorCochain(2, f2, g1), OperatorCochain(1, h1, None))


def two_cochain_parts(c: PairCochain) -> tuple:
    if c.degree != 2:
        raise ShapeError("expected a degree-2 pair cochain")
    return c.top.f, c.top.g, c.bottom.f


# ---------------------------------------------------------------------------
# assembled differentials


def _operator_delta_generic(delta, mdelta, phi, c: OperatorCochain) -> OperatorCochain:
    top = delta(c.f)
    if c.degree == 1:
        bot = -phi(c.f)
    else:
        bot = -(mdelta(c.g)) - phi(c.f)
    return OperatorCochain(c.degree + 1, top, bot)


def _pair_delta_generic(opdelta, defect, c: PairCochain) -> PairCochain:
    top = opdelta(c.top)
    if c.degree == 1:
        bottom = OperatorCochain(1, -defect(c.top.f), None)
    else:
        shift = OperatorCochain(c.degree, defect(c.top.f),
                                defect(c.top.g))
        if not _sign_is_plus(c.degree):
            shift = -shift
        bottom = opdelta(c.bottom) + shift
    return PairCochain(c.degree + 1, top, bottom)


def operator_delta(pair: MRBDerPair, bim: Bimodule, c: OperatorCochain,
                   convention: OperatorMapConvention = DEFAULT_CONVENTION) -> OperatorCochain:
    """OC^n -> OC^{n+1}: (f, g) |-> (delta f, -modified_delta g - phi f)."""
    return _operator_delta_generic(
        lambda f: hochschild_delta(pair, bim, f),
        lambda g: modified_delta(pair, bim, g),
        lambda f: operator_map(pair, bim, f, convention),
        c)


def pair_delta(pair: MRBDerPair, bim: Bimodule, c: PairCochain,
               convention: OperatorMapConvention = DEFAULT_CONVENTION) -> PairCochain:
    """PC^n -> PC^{n+1}, the full differential of the pair complex."""
    return _pair_delta_generic(
        lambda oc: operator_delta(pair, bim, oc, convention),
        lambda f: derivation_defect(pair, bim, f),
        c)


# ---------------------------------------------------------------------------
# flat spaces and matrices


def hom_space(pair_dim: int, bim_dim: int, n: int, field: Field) -> TensorSpace:
    return TensorSpace(field, (pair_dim,) * n, bim_dim)


@dataclass(frozen=True)
class OperatorSpace:
    field: Field
    dim_a: int
    dim_m: int
    degree: int

    @property
    def dim(self) -> int:
        d = self.dim_a ** self.degree * self.dim_m
        if self.degree >= 2:
            d += self.dim_a ** (self.degree - 1) * self.dim_m
        return d

    def _parts(self):
        top = TensorSpace(self.field, (self.dim_a,) * self.degree, self.dim_m)
        if self.degree == 1:
            return top, None
        return top, TensorSpace(self.field, (self.dim_a,) * (self.degree - 1), self.dim_m)

    def zero(self) -> OperatorCochain:
        top, bot = self._parts()
        return OperatorCochain(self.degree, top.zero(), None if bot is None else bot.zero())

    def flatten(self, c: OperatorCochain) -> tuple:
        if c.degree != self.degree:
            raise ShapeError("cochain degree %d, space degree %d" % (c.degree, self.degree))
        return c.f.entries + (c.g.entries if c.g is not None else ())

    def unflatten(self, vec) -> OperatorCochain:
        top, bot = self._parts()
        k = top.dim
        f = top.unflatten(vec[:k])
        g = None if bot is None else bot.unflatten(vec[k:])
        return OperatorCochain(self.degree, f, g)

    def basis(self):
        F = self.field
        n = self.dim
        for k in range(n):
            ent = [F.zero] * n
            ent[k] = F.one
            yield self.unflatten(tuple(ent))


@dataclass(frozen=True)
class PairSpace:
    field: Field
    dim_a: int
    dim_m: int
    degree: int

    def _parts(self):
        top = OperatorSpace(self.field, self.dim_a, self.dim_m, self.degree)
        if self.degree == 1:
            return top, None
        return top, OperatorSpace(self.field, self.dim_a, self.dim_m, self.degree - 1)

    @property
    def dim(self) -> int:
        top, bot = self._parts()
        return top.dim + (bot.dim if bot is not None else 0)

    def zero(self) -> PairCochain:
        top, bot = self._parts()
        return PairCochain(self.degree, top.zero(), None if bot is None else bot.zero())

    def flatten(self, c: PairCochain) -> tuple:
        if c.degree != self.degree:
            raise ShapeError("cochain degree %d, space degree %d" % (c.degree, self.degree))
        top, bot = self._parts()
        out = top.flatten(c.top)
        if bot is not None:
            out = out + bot.flatten(c.bottom)
        return out

    def unflatten(self, vec) -> PairCochain:
        top, bot = self._parts()
        k = top.dim
        t = top.unflatten(vec[:k])
        b = None if bot is None else bot.unflatten(vec[k:])
        return PairCochain(self.degree, t, b)

    def basis(self):
        F = self.field
        n = self.dim
        for k in range(n):
            ent = [F.zero] * n
            ent[k] = F.one
            yield self.unflatten(tuple(ent))


_MATRIX_KINDS = ("hochschild", "modified", "operator_map", "derivation_defect",
                 "operator", "operator_defect", "pair")


def differential_matrix(pair: MRBDerPair, bim: Bimodule, n: int, which: str,
                        convention: OperatorMapConvention = DEFAULT_CONVENTION) -> Matrix:
    """Flatten one of the structure maps at degree n to a matrix.

    ``which``: hochschild, modified, operator_map, derivation_defect act on
    C^n; operator, operator_defect act on OC^n; pair acts on PC^n.
    """
    if which not in _MATRIX_KINDS:
        raise ValueError("unknown map %r" % (which,))
    if not (1 <= n <= MAX_MATRIX_DEGREE):
        raise DegreeCapExceeded("matrices are supported for degrees 1..%d" % MAX_MATRIX_DEGREE)
    F, nA, m = pair.field, pair.dim, bim.dim_m
    if which in ("hochschild", "modified", "operator_map", "derivation_defect"):
        dom = hom_space(nA, m, n, F)
        if which == "hochschild":
            return operator_matrix(dom, hom_space(nA, m, n + 1, F),
                                   lambda f: hochschild_delta(pair, bim, f))
        if which == "modified":
            return operator_matrix(dom, hom_space(nA, m, n + 1, F),
                                   lambda f: modified_delta(pair, bim, f))
        if which == "operator_map":
            return operator_matrix(dom, dom, lambda f: operator_map(pair, bim, f, convention))
        return operator_matrix(dom, dom, lambda f: derivation_defect(pair, bim, f))
    if which == "operator":
        return operator_matrix(OperatorSpace(F, nA, m, n), OperatorSpace(F, nA, m, n + 1),
                               lambda c: operator_delta(pair, bim, c, convention))
    if which == "operator_defect":
        dom = OperatorSpace(F, nA, m, n)
        def fn(c):
            g = None if c.g is None else derivation_defect(pair, bim, c.g)
            return OperatorCochain(c.degree, derivation_defect(pair, bim, c.f), g)
        return operator_matrix(dom, dom, fn)
    return operator_matrix(PairSpace(F, nA, m, n), PairSpace(F, nA, m, n + 1),
                           lambda c: pair_delta(pair, bim, c, convention))


@dataclass(frozen=True)
class CohomologyResult:
    degree: int
    dim_cocycles: int
    dim_coboundaries: int
    dim_h: int
    representatives: tuple  # PairCochains spanning a complement of B in Z


def cohomology(pair: MRBDerPair, bim: Bimodule, n: int,
               convention: OperatorMapConvention = DEFAULT_CONVENTION) -> CohomologyResult:
    """H^n of the pair complex; B^1 = 0 by convention.

    Representatives are canonical: RREF rows of the cocycle space whose pivots
    are not pivots of the coboundary space.
    """
    if not (1 <= n <= MAX_COHOMOLOGY_DEGREE):
        raise DegreeCapExceeded("cohomology is supported for degrees 1..%d" % MAX_COHOMOLOGY_DEGREE)
    F = pair.field
    space = PairSpace(F, pair.dim, bim.dim_m, n)
    d_n = differential_matrix(pair, bim, n, "pair", convention)
    _, kernel = rank_and_kernel(d_n)
    z_basis, z_pivots = rref_vectors(F, kernel)
    if n == 1:
        b_basis, b_pivots = [], []
    else:
        d_prev = differential_matrix(pair, bim, n - 1, "pair", convention)
        cols = [tuple(d_prev.rows[i][j] for i in range(d_prev.nrows))
                for j in range(d_prev.ncols)]
        b_basis, b_pivots = rref_vectors(F, cols)
    if not set(b_pivots) <= set(z_pivots):
        # would mean the differential does not square to zero
        raise AssertionError("coboundaries escape the cocycles; complex is broken")
    bset = set(b_pivots)
    reps = tuple(space.unflatten(v) for v, p in zip(z_basis, z_pivots) if p not in bset)
    return CohomologyResult(n, len(z_basis), len(b_basis), len(z_basis) - len(b_basis), reps)


# ---------------------------------------------------------------------------
# skew-symmetrization and the Lie-side complex


def _permutations_with_sign(n: int):
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        yield perm, (inv % 2 == 0)


def skew_symmetrize(f: MultiTensor) -> MultiTensor:
    """S_n(f) = sum_{sigma} sgn(sigma) f(a_{sigma(1)},..,a_{sigma(n)}); no 1/n!."""
    n = f.arity
    if len(set(f.dims)) > 1:
        raise ShapeError("slots must share one dimension")
    acc = MultiTensor.zeros(f.field, f.dims, f.cod)
    for perm, even in _permutations_with_sign(n):
        t = f.permute_slots(list(perm))
        acc = acc + t if even else acc - t
    return acc


def skew_operator_cochain(c: OperatorCochain) -> OperatorCochain:
    g = None if c.g is None else skew_symmetrize(c.g)
    return OperatorCochain(c.degree, skew_symmetrize(c.f), g)


def skew_pair_cochain(c: PairCochain) -> PairCochain:
    bot = None if c.bottom is None else skew_operator_cochain(c.bottom)
    return PairCochain(c.degree, skew_operator_cochain(c.top), bot)


def _rho_of(lp: LiePair):
    if lp.rho is not None:
        return lp.rho, lp.R_M, lp.d_M
    # adjoint: rho = bracket acting on the algebra itself
    return lp.bracket, lp.R, lp.d


def ce_delta(lp: LiePair, f: MultiTensor) -> MultiTensor:
    """Chevalley-Eilenberg coboundary with the same global (-1)^{n+1}
    normalization as :func:`hochschild_delta`:

        (d f)(a_1..a_{n+1}) = (-1)^{n+1} * [
            sum_i (-1)^{i+1} rho(a_i) f(.. a_i^ ..)
            + sum_{i<j} (-1)^{i+j} f([a_i,a_j], .. a_i^ .. a_j^ ..) ]
    """
    F, nA = lp.field, lp.dim
    rho, _, _ = _rho_of(lp)
    m = rho.dims[1]
    n = f.arity
    if f.dims != (nA,) * n or f.cod != m:
        raise ShapeError("cochain must map A^%d -> M" % n)
    if f.is_zero():
        return MultiTensor.zeros(F, (nA,) * (n + 1), m)
    out = []
    norm_plus = _sign_is_plus(n + 1)
    for idx in _index_tuples((nA,) * (n + 1)):
        acc = [F.zero] * m
        for i in range(1, n + 2):
            rest = idx[:i - 1] + idx[i:]
            fv = f.value_at(*rest)
            term = _act_left(F, rho, idx[i - 1], fv)
            _vacc(F, acc, term, _sign_is_plus(i + 1) == norm_plus)
        for i in range(1, n + 2):
            for j in range(i + 1, n + 2):
                vec = lp.bracket.value_at(idx[i - 1], idx[j - 1])
                rest = idx[:i - 1] + idx[i:j - 1] + idx[j:]
                term = _eval_slot_vec(F, f, rest, 0, vec)
                _vacc(F, acc, term, _sign_is_plus(i + j) == norm_plus)
        out.extend(acc)
    return MultiTensor(F, (nA,) * (n + 1), m, tuple(out))


def induced_lie_pair(lp: LiePair) -> LiePair:
    """Bracket [a,b]_R = [Ra,b] + [a,Rb] with rho~(a) = rho(Ra) - R_M rho(a)."""
    br = lp.bracket.precompose_slot(0, lp.R) + lp.bracket.precompose_slot(1, lp.R)
    rho, R_M, d_M = _rho_of(lp)
    rho_t = rho.precompose_slot(0, lp.R) - rho.postcompose(R_M)
    return LiePair(lp.field, lp.dim, br, lp.R, lp.d, lp.kappa, rho_t, R_M, d_M)


def lie_operator_map(lp: LiePair, f: MultiTensor,
                     convention: OperatorMapConvention = DEFAULT_CONVENTION) -> MultiTensor:
    _, R_M, _ = _rho_of(lp)
    return _operator_map_core(lp.field, lp.R, R_M, lp.kappa, f, convention)


def lie_derivation_defect(lp: LiePair, f: MultiTensor) -> MultiTensor:
    _, _, d_M = _rho_of(lp)
    return _derivation_defect_core(lp.field, lp.d, d_M, f)


def lie_operator_delta(lp: LiePair, c: OperatorCochain,
                       convention: OperatorMapConvention = DEFAULT_CONVENTION) -> OperatorCochain:
    ind = induced_lie_pair(lp)
    return _operator_delta_generic(
        lambda f: ce_delta(lp, f),
        lambda g: ce_delta(ind, g),
        lambda f: lie_operator_map(lp, f, convention),
        c)


def lie_pair_delta(lp: LiePair, c: PairCochain,
                   convention: OperatorMapConvention = DEFAULT_CONVENTION) -> PairCochain:
    return _pair_delta_generic(
        lambda oc: lie_operator_delta(lp, oc, convention),
        lambda f: lie_derivation_defect(lp, f),
        c)
