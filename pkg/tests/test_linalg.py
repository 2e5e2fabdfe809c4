import random

import pytest
from hypothesis import given, settings, strategies as st

from mrbder.fields import Field, QQ
from mrbder.linalg import (EntryCapExceeded, Matrix, MultiTensor, ShapeError,
                           TensorSpace, matrix_as_tensor, max_tensor_entries,
                           operator_matrix, rank_and_kernel, rref, rref_vectors,
                           set_max_tensor_entries, solve_linear, tensor_as_matrix)

F5 = Field.prime(5)


def qmat(rows):
    return Matrix.from_rows(QQ, [[QQ.parse(x) for x in row] for row in rows])


class TestMatrix:
    def test_apply_column_convention(self):
        # column j is the image of e_j
        m = qmat([[1, 2], [3, 4]])
        assert m.apply((1, 0)) == (QQ.parse(1), QQ.parse(3))
        assert m.apply((0, 1)) == (QQ.parse(2), QQ.parse(4))

    def test_mul_against_apply(self):
        rng = random.Random(1)
        for _ in range(20):
            a = Matrix.from_rows(QQ, [[QQ.random(rng) for _ in range(3)] for _ in range(2)])
            b = Matrix.from_rows(QQ, [[QQ.random(rng) for _ in range(2)] for _ in range(3)])
            v = tuple(QQ.random(rng) for _ in range(2))
            assert (a * b).apply(v) == a.apply(b.apply(v))

    def test_shape_errors(self):
        m = qmat([[1, 2]])
        with pytest.raises(ShapeError):
            m.apply((1,))
        with pytest.raises(ShapeError):
            m + qmat([[1], [2]])
        with pytest.raises(ShapeError):
            qmat([[1, 2]]) * qmat([[1, 2]])

    def test_identity_scalar_blockdiag(self):
        i2 = Matrix.identity(QQ, 2)
        s = Matrix.scalar(QQ, 2, QQ.parse(3))
        assert s.apply((1, 1)) == (QQ.parse(3), QQ.parse(3))
        bd = i2.block_diag(s)
        assert bd.nrows == 4 and bd.ncols == 4
        assert bd.apply((1, 0, 1, 0)) == (QQ.one, QQ.zero, QQ.parse(3), QQ.zero)

    def test_inverse(self):
        m = qmat([[1, 2], [3, 5]])
        mi = m.inverse()
        assert (m * mi - Matrix.identity(QQ, 2)).is_zero()
        assert (mi * m - Matrix.identity(QQ, 2)).is_zero()
        with pytest.raises(ValueError):
            qmat([[1, 2], [2, 4]]).inverse()
        with pytest.raises(ShapeError):
            qmat([[1, 2]]).inverse()

    def test_inverse_f5(self):
        rng = random.Random(7)
        for _ in range(20):
            rows = [[F5.random(rng) for _ in range(3)] for _ in range(3)]
            m = Matrix.from_rows(F5, rows)
            rank, _ = rank_and_kernel(m)
            if rank < 3:
                continue
            assert (m * m.inverse() - Matrix.identity(F5, 3)).is_zero()


class TestRref:
    def test_known_form(self):
        rows = [[QQ.parse(x) for x in r] for r in ([2, 4, 6], [1, 2, 4])]
        pivots = rref(QQ, rows)
        assert pivots == [0, 2]
        assert rows[0] == [QQ.one, QQ.parse(2), QQ.zero]
        assert rows[1] == [QQ.zero, QQ.zero, QQ.one]

    def test_idempotent(self):
        rng = random.Random(3)
        for _ in range(25):
            rows = [[F5.random(rng) for _ in range(4)] for _ in range(3)]
            first = [r[:] for r in rows]
            rref(F5, first)
            again = [r[:] for r in first]
            rref(F5, again)
            assert first == again

    def test_rref_vectors_canonical(self):
        # same span listed in different orders reduces identically
        v1 = [tuple(QQ.parse(x) for x in v) for v in ([1, 1, 0], [0, 1, 1])]
        v2 = [tuple(QQ.parse(x) for x in v) for v in ([1, 2, 1], [0, 1, 1], [1, 1, 0])]
        b1, p1 = rref_vectors(QQ, v1)
        b2, p2 = rref_vectors(QQ, v2)
        assert b1 == b2 and p1 == p2


class TestKernelSolve:
    def test_rank_deficient_kernel(self):
        m = qmat([[1, 2], [2, 4]])
        rank, kernel = rank_and_kernel(m)
        assert rank == 1
        assert len(kernel) == 1
        assert kernel[0] == (QQ.parse(-2), QQ.one)

    def test_zero_matrix_kernel_is_everything(self):
        m = Matrix.zeros(QQ, 2, 3)
        rank, kernel = rank_and_kernel(m)
        assert rank == 0
        assert kernel == [(QQ.one, QQ.zero, QQ.zero),
                          (QQ.zero, QQ.one, QQ.zero),
                          (QQ.zero, QQ.zero, QQ.one)]

    def test_kernel_really_annihilates(self):
        rng = random.Random(11)
        for _ in range(30):
            m = Matrix.from_rows(F5, [[F5.random(rng) for _ in range(4)] for _ in range(3)])
            rank, kernel = rank_and_kernel(m)
            assert rank + len(kernel) == 4
            for v in kernel:
                assert all(x == 0 for x in m.apply(v))

    def test_solve_consistent(self):
        m = qmat([[1, 2], [3, 4]])
        b = (QQ.parse(5), QQ.parse(11))
        x = solve_linear(m, b)
        assert x is not None and m.apply(x) == b

    def test_solve_inconsistent(self):
        m = qmat([[1, 2], [2, 4]])
        assert solve_linear(m, (QQ.one, QQ.zero)) is None

    def test_solve_underdetermined_free_vars_zero(self):
        m = qmat([[1, 0, 2]])
        x = solve_linear(m, (QQ.parse(3),))
        assert x == (QQ.parse(3), QQ.zero, QQ.zero)

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=25, deadline=None)
    def test_solve_random_f5(self, seed):
        rng = random.Random(seed)
        m = Matrix.from_rows(F5, [[F5.random(rng) for _ in range(3)] for _ in range(3)])
        x0 = tuple(F5.random(rng) for _ in range(3))
        b = m.apply(x0)
        x = solve_linear(m, b)
        assert x is not None
        assert m.apply(x) == b


class TestMultiTensor:
    def bilinear(self):
        # f(e_i, e_j) = (i + j, i * j) over Q
        return MultiTensor.from_map(QQ, (2, 3), 2,
                                    lambda i, j: (QQ.parse(i + j), QQ.parse(i * j)))

    def test_value_eval_agree(self):
        t = self.bilinear()
        for i in range(2):
            for j in range(3):
                u = tuple(QQ.one if k == i else QQ.zero for k in range(2))
                v = tuple(QQ.one if k == j else QQ.zero for k in range(3))
                assert t.eval([u, v]) == t.value_at(i, j)

    def test_eval_is_multilinear(self):
        t = self.bilinear()
        rng = random.Random(5)
        for _ in range(10):
            u1 = tuple(QQ.random(rng) for _ in range(2))
            u2 = tuple(QQ.random(rng) for _ in range(2))
            v = tuple(QQ.random(rng) for _ in range(3))
            lhs = t.eval([tuple(QQ.add(a, b) for a, b in zip(u1, u2)), v])
            r1 = t.eval([u1, v])
            r2 = t.eval([u2, v])
            assert lhs == tuple(QQ.add(a, b) for a, b in zip(r1, r2))

    def test_precompose_slot(self):
        t = self.bilinear()
        m = qmat([[0, 1], [1, 0]])  # swap on the first slot
        s = t.precompose_slot(0, m)
        for i in range(2):
            for j in range(3):
                assert s.value_at(i, j) == t.value_at(1 - i, j)

    def test_precompose_rectangular(self):
        t = self.bilinear()
        m = qmat([[1], [2]])  # k -> k^2
        s = t.precompose_slot(0, m)
        assert s.dims == (1, 3)
        for j in range(3):
            want = tuple(QQ.add(a, QQ.mul(QQ.parse(2), b))
                         for a, b in zip(t.value_at(0, j), t.value_at(1, j)))
            assert s.value_at(0, j) == want

    def test_postcompose(self):
        t = self.bilinear()
        m = qmat([[2, 0], [0, 3]])
        s = t.postcompose(m)
        for i in range(2):
            for j in range(3):
                assert s.value_at(i, j) == m.apply(t.value_at(i, j))

    def test_permute_slots(self):
        t = MultiTensor.from_map(QQ, (2, 2, 2), 1,
                                 lambda i, j, k: (QQ.parse(i + 2 * j + 4 * k),))
        # argument i of the result feeds slot perm[i] of t
        p = t.permute_slots([2, 0, 1])
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    u = [tuple(QQ.one if a == x else QQ.zero for a in range(2))
                         for x in (i, j, k)]
                    assert p.eval(u) == t.eval([u[1], u[2], u[0]])
        assert p.permute_slots([1, 2, 0]).entries == t.entries

    def test_arith(self):
        t = self.bilinear()
        z = t - t
        assert z.is_zero()
        assert (t + t).entries == t.scale(QQ.parse(2)).entries
        assert (-t).entries == t.scale(QQ.parse(-1)).entries

    def test_matrix_tensor_round_trip(self):
        m = qmat([[1, 2, 3], [4, 5, 6]])
        assert tensor_as_matrix(matrix_as_tensor(m)).rows == m.rows
        t = MultiTensor.from_map(QQ, (2,), 3, lambda i: (QQ.parse(i), QQ.one, QQ.zero))
        assert matrix_as_tensor(tensor_as_matrix(t)).entries == t.entries


class TestTensorSpace:
    def test_flatten_round_trip(self):
        sp = TensorSpace(QQ, (2, 2), 2)
        assert sp.dim == 8
        rng = random.Random(2)
        vec = tuple(QQ.random(rng) for _ in range(8))
        assert sp.flatten(sp.unflatten(vec)) == vec

    def test_basis(self):
        sp = TensorSpace(F5, (2,), 2)
        basis = list(sp.basis())
        assert len(basis) == 4
        flats = [sp.flatten(b) for b in basis]
        for k, f in enumerate(flats):
            assert f[k] == 1 and sum(f) == 1

    def test_operator_matrix_linear_map(self):
        sp = TensorSpace(QQ, (2,), 2)
        m = qmat([[0, 1], [1, 0]])
        mat = operator_matrix(sp, sp, lambda t: t.postcompose(m))
        # swapping codomain coordinates permutes the flat entries pairwise
        vec = tuple(QQ.parse(x) for x in (1, 2, 3, 4))
        assert mat.apply(vec) == tuple(QQ.parse(x) for x in (2, 1, 4, 3))


def test_entry_cap(monkeypatch):
    old = max_tensor_entries()
    try:
        set_max_tensor_entries(10)
        with pytest.raises(EntryCapExceeded):
            MultiTensor.zeros(QQ, (4, 4), 4)
        set_max_tensor_entries(10 ** 6)
        MultiTensor.zeros(QQ, (4, 4), 4)
    finally:
        set_max_tensor_entries(old)
