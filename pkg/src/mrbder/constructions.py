"""Constructions on pairs and bimodules.

Direct sums, semidirect products, the induced ("descendent") multiplication
mu_R(a,b) = mu(Ra,b) + mu(a,Rb) with its induced bimodule actions, passage to
the commutator Lie bracket, and the embedding of ordinary Rota-Baxter
operators of weight lambda via R = lam*Id + 2P, kappa = -lam^2.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import Field
from .linalg import Matrix, MultiTensor, ShapeError
from .structures import (Algebra, Bimodule, CheckFailure, CheckReport, InvalidStructure,
                         MRBDerPair, _is_zero_vec, _report, _vadd, _vscale, _vsub,
                         check_bimodule, check_commutation, check_derivation,
                         unit_vector, verify_pair)


class KappaMismatch(ValueError):
    """Summands of a direct sum must share the same weight."""


def direct_sum(p1: MRBDerPair, p2: MRBDerPair) -> MRBDerPair:
    """Componentwise structure on A1 + A2; requires kappa1 = kappa2."""
    F = p1.field
    if F != p2.field:
        raise ShapeError("summands over different fields")
    if p1.kappa != p2.kappa:
        raise KappaMismatch("kappa mismatch: %s vs %s" % (F.to_str(p1.kappa), F.to_str(p2.kappa)))
    n1, n2 = p1.dim, p2.dim
    n = n1 + n2
    z = (F.zero,) * n

    def fn(i, j):
        if i < n1 and j < n1:
            return p1.mu.value_at(i, j) + (F.zero,) * n2
        if i >= n1 and j >= n1:
            return (F.zero,) * n1 + p2.mu.value_at(i - n1, j - n1)
        return z

    alg = Algebra(F, n, MultiTensor.from_map(F, (n, n), n, fn))
    return MRBDerPair(alg, p1.R.block_diag(p2.R), p1.d.block_diag(p2.d), p1.kappa)


def semidirect_product(pair: MRBDerPair, bim: Bimodule) -> MRBDerPair:
    """A + M with mu(a+m, b+n) = mu(a,b) + l(a,n) + r(m,b), R + R_M, d + d_M.

    Precondition: ``bim`` passes :func:`check_bimodule`; raises
    :class:`InvalidStructure` otherwise.
    """
    rep = check_bimodule(pair, bim)
    if not rep.ok:
        raise InvalidStructure("not a bimodule: first failure %r" % (rep.first,), rep)
    F = pair.field
    n, m = pair.dim, bim.dim_m
    N = n + m

    def fn(i, j):
        if i < n and j < n:
            return pair.mu.value_at(i, j) + (F.zero,) * m
        if i < n and j >= n:
            return (F.zero,) * n + bim.left.value_at(i, j - n)
        if i >= n and j < n:
            return (F.zero,) * n + bim.right.value_at(i - n, j)
        return (F.zero,) * N

    alg = Algebra(F, N, MultiTensor.from_map(F, (N, N), N, fn))
    return MRBDerPair(alg, pair.R.block_diag(bim.R_M), pair.d.block_diag(bim.d_M), pair.kappa)


def induced_algebra(pair: MRBDerPair) -> MRBDerPair:
    """The pair (A, mu_R, R, d, kappa) with mu_R(a,b) = mu(Ra,b) + mu(a,Rb).

    Precondition: ``pair`` verifies; raises :class:`InvalidStructure` otherwise.
    """
    rep = verify_pair(pair)
    if not rep.ok:
        raise InvalidStructure("pair does not verify: first failure %r" % (rep.first,), rep)
    mu_r = pair.mu.precompose_slot(0, pair.R) + pair.mu.precompose_slot(1, pair.R)
    return MRBDerPair(Algebra(pair.field, pair.dim, mu_r), pair.R, pair.d, pair.kappa)


def induced_bimodule(pair: MRBDerPair, bim: Bimodule) -> Bimodule:
    """Actions for the induced pair:

        l~(a, m) = l(Ra, m) - R_M(l(a, m))
        r~(m, a) = r(m, Ra) - R_M(r(m, a))

    with the same R_M, d_M.  A bimodule over :func:`induced_algebra` of the pair.
    """
    left = bim.left.precompose_slot(0, pair.R) - bim.left.postcompose(bim.R_M)
    right = bim.right.precompose_slot(1, pair.R) - bim.right.postcompose(bim.R_M)
    return Bimodule(bim.dim_m, left, right, bim.R_M, bim.d_M)


@dataclass(frozen=True)
class LiePair:
    """Lie algebra with bracket tensor, modified Rota-Baxter operator R of
    weight kappa, derivation d, and optionally a representation
    (rho: A x M -> M, R_M, d_M)."""

    field: Field
    dim: int
    bracket: MultiTensor
    R: Matrix
    d: Matrix
    kappa: object
    rho: MultiTensor | None = None
    R_M: Matrix | None = None
    d_M: Matrix | None = None

    @property
    def dim_m(self):
        return self.rho.dims[1] if self.rho is not None else None


def check_lie_pair(lp: LiePair) -> CheckReport:
    """Bracket axioms, the modified Rota-Baxter Lie identity

        [Ra, Rb] = R([Ra, b] + [a, Rb]) + kappa*[a, b]

    derivation and commutation axioms, and the representation identities when
    rho is attached."""
    F, n, br = lp.field, lp.dim, lp.bracket
    fails = []
    ea = [unit_vector(F, n, i) for i in range(n)]
    Rc = [lp.R.apply(v) for v in ea]
    dc = [lp.d.apply(v) for v in ea]
    for i in range(n):
        res = br.value_at(i, i)
        if not _is_zero_vec(F, res):
            fails.append(CheckFailure("alternating", (i,), res))
    for i in range(n):
        for j in range(i + 1, n):
            res = _vadd(F, br.value_at(i, j), br.value_at(j, i))
            if not _is_zero_vec(F, res):
                fails.append(CheckFailure("antisymmetry", (i, j), res))
    for i in range(n):
        for j in range(n):
            bij = br.value_at(i, j)
            for k in range(n):
                s = br.eval([bij, ea[k]])
                s = _vadd(F, s, br.eval([br.value_at(j, k), ea[i]]))
                s = _vadd(F, s, br.eval([br.value_at(k, i), ea[j]]))
                if not _is_zero_vec(F, s):
                    fails.append(CheckFailure("jacobi", (i, j, k), s))
    for i in range(n):
        for j in range(n):
            lhs = br.eval([Rc[i], Rc[j]])
            inner = _vadd(F, br.eval([Rc[i], ea[j]]), br.eval([ea[i], Rc[j]]))
            rhs = _vadd(F, lp.R.apply(inner), _vscale(F, lp.kappa, br.value_at(i, j)))
            res = _vsub(F, lhs, rhs)
            if not _is_zero_vec(F, res):
                fails.append(CheckFailure("mrb-lie", (i, j), res))
    for i in range(n):
        for j in range(n):
            lhs = lp.d.apply(br.value_at(i, j))
            rhs = _vadd(F, br.eval([dc[i], ea[j]]), br.eval([ea[i], dc[j]]))
            res = _vsub(F, lhs, rhs)
            if not _is_zero_vec(F, res):
                fails.append(CheckFailure("bracket-derivation", (i, j), res))
    fails.extend(check_commutation(lp.R, lp.d).failures)

    if lp.rho is not None:
        m = lp.rho.dims[1]
        em = [unit_vector(F, m, u) for u in range(m)]
        RMc = [lp.R_M.apply(v) for v in em]
        dMc = [lp.d_M.apply(v) for v in em]
        rho = lp.rho
        for i in range(n):
            for j in range(n):
                for u in range(m):
                    lhs = rho.eval([br.value_at(i, j), em[u]])
                    rhs = _vsub(F, rho.eval([ea[i], rho.value_at(j, u)]),
                                rho.eval([ea[j], rho.value_at(i, u)]))
                    res = _vsub(F, lhs, rhs)
                    if not _is_zero_vec(F, res):
                        fails.append(CheckFailure("rep-bracket", (i, j, u), res))
        for i in range(n):
            for u in range(m):
                lhs = rho.eval([Rc[i], RMc[u]])
                inner = _vadd(F, rho.eval([ea[i], RMc[u]]), rho.eval([Rc[i], em[u]]))
                rhs = _vadd(F, lp.R_M.apply(inner), _vscale(F, lp.kappa, rho.value_at(i, u)))
                res = _vsub(F, lhs, rhs)
                if not _is_zero_vec(F, res):
                    fails.append(CheckFailure("rep-op", (i, u), res))
        for i in range(n):
            for u in range(m):
                lhs = lp.d_M.apply(rho.value_at(i, u))
                rhs = _vadd(F, rho.eval([dc[i], em[u]]), rho.eval([ea[i], dMc[u]]))
                res = _vsub(F, lhs, rhs)
                if not _is_zero_vec(F, res):
                    fails.append(CheckFailure("rep-derivation", (i, u), res))
        fails.extend(check_commutation(lp.R_M, lp.d_M, "rep-op-der-commute").failures)
    return _report(fails)


def commutator_bracket(alg: Algebra) -> MultiTensor:
    return alg.mu - alg.mu.permute_slots([1, 0])


def commutator_lie_pair(pair: MRBDerPair) -> LiePair:
    """[a,b] = mu(a,b) - mu(b,a) with the same (R, d, kappa)."""
    return LiePair(pair.field, pair.dim, commutator_bracket(pair.algebra),
                   pair.R, pair.d, pair.kappa)


def rho_representation(pair: MRBDerPair, bim: Bimodule) -> LiePair:
    """Commutator Lie pair together with rho(a)m = l(a,m) - r(m,a) acting on M."""
    rho = bim.left - bim.right.permute_slots([1, 0])
    lp = commutator_lie_pair(pair)
    return LiePair(lp.field, lp.dim, lp.bracket, lp.R, lp.d, lp.kappa,
                   rho, bim.R_M, bim.d_M)


def check_rota_baxter(alg: Algebra, P: Matrix, lam) -> CheckReport:
    """Rota-Baxter of weight lambda: mu(Pa,Pb) = P(mu(Pa,b) + mu(a,Pb)) + lam*P(mu(a,b))."""
    F, n, mu = alg.field, alg.dim, alg.mu
    fails = []
    Pc = [P.apply(unit_vector(F, n, i)) for i in range(n)]
    for i in range(n):
        for j in range(n):
            ei, ej = unit_vector(F, n, i), unit_vector(F, n, j)
            lhs = mu.eval([Pc[i], Pc[j]])
            inner = _vadd(F, mu.eval([Pc[i], ej]), mu.eval([ei, Pc[j]]))
            inner = _vadd(F, inner, _vscale(F, lam, mu.value_at(i, j)))
            res = _vsub(F, lhs, P.apply(inner))
            if not _is_zero_vec(F, res):
                fails.append(CheckFailure("rota-baxter", (i, j), res))
    return _report(fails)


def rb_to_mrb(alg: Algebra, P: Matrix, lam, d: Matrix) -> MRBDerPair:
    """Weight-lambda Rota-Baxter AssDer data to a modified pair:
    R = lam*Id + 2P, kappa = -lam^2.  Validates the RB identity, the
    derivation axiom, and P.d = d.P first."""
    F = alg.field
    rep = CheckReport.combine([
        check_rota_baxter(alg, P, lam),
        check_derivation(alg, d),
        check_commutation(P, d),
    ])
    if not rep.ok:
        raise InvalidStructure("not a Rota-Baxter AssDer structure: %r" % (rep.first,), rep)
    two = F.add(F.one, F.one)
    R = Matrix.scalar(F, alg.dim, lam) + P.scale(two)
    return MRBDerPair(alg, R, d, F.neg(F.mul(lam, lam)))


def bimodule_rb_to_mrb(alg: Algebra, P: Matrix, lam, d: Matrix,
                       left: MultiTensor, right: MultiTensor,
                       T_M: Matrix, d_M: Matrix) -> Bimodule:
    """Rota-Baxter bimodule data (T_M of weight lambda) to a modified bimodule:
    R_M = lam*Id + 2*T_M.

    Checks the weight-lambda module identities

        l(Pa, T_M m) = T_M(l(Pa, m) + l(a, T_M m) + lam*l(a, m))
        r(T_M m, Pa) = T_M(r(T_M m, a) + r(m, Pa) + lam*r(m, a))

    plus the derivation compatibilities and T_M . d_M = d_M . T_M.
    """
    F = alg.field
    n = alg.dim
    m = T_M.nrows
    fails = []
    ea = [unit_vector(F, n, i) for i in range(n)]
    em = [unit_vector(F, m, u) for u in range(m)]
    Pc = [P.apply(v) for v in ea]
    Tc = [T_M.apply(v) for v in em]
    dc = [d.apply(v) for v in ea]
    dMc = [d_M.apply(v) for v in em]
    for i in range(n):
        for u in range(m):
            lhs = left.eval([Pc[i], Tc[u]])
            inner = _vadd(F, left.eval([Pc[i], em[u]]), left.eval([ea[i], Tc[u]]))
            inner = _vadd(F, inner, _vscale(F, lam, left.value_at(i, u)))
            res = _vsub(F, lhs, T_M.apply(inner))
            if not _is_zero_vec(F, res):
                fails.append(CheckFailure("rb-module-left", (i, u), res))
    for u in range(m):
        for i in range(n):
            lhs = right.eval([Tc[u], Pc[i]])
            inner = _vadd(F, right.eval([Tc[u], ea[i]]), right.eval([em[u], Pc[i]]))
            inner = _vadd(F, inner, _vscale(F, lam, right.value_at(u, i)))
            res = _vsub(F, lhs, T_M.apply(inner))
            if not _is_zero_vec(F, res):
                fails.append(CheckFailure("rb-module-right", (u, i), res))
    for i in range(n):
        for u in range(m):
            lhs = d_M.apply(left.value_at(i, u))
            rhs = _vadd(F, left.eval([dc[i], em[u]]), left.eval([ea[i], dMc[u]]))
            res = _vsub(F, lhs, rhs)
            if not _is_zero_vec(F, res):
                fails.append(CheckFailure("rb-der-left", (i, u), res))
    for u in range(m):
        for i in range(n):
            lhs = d_M.apply(right.value_at(u, i))
            rhs = _vadd(F, right.eval([dMc[u], ea[i]]), right.eval([em[u], dc[i]]))
            res = _vsub(F, lhs, rhs)
            if not _is_zero_vec(F, res):
                fails.append(CheckFailure("rb-der-right", (u, i), res))
    fails.extend(check_commutation(T_M, d_M, "rb-op-der-commute").failures)
    rep = _report(fails)
    if not rep.ok:
        raise InvalidStructure("not a Rota-Baxter bimodule: %r" % (rep.first,), rep)
    two = F.add(F.one, F.one)
    R_M = Matrix.scalar(F, m, lam) + T_M.scale(two)
    return Bimodule(m, left, right, R_M, d_M)
