import random

import numpy as np
import pytest

from fqxsplit import ff, linalg as la, polyrat as pr
from fqxsplit.errors import NotSquare
from fqxsplit.polyrat import Poly

from conftest import rand_ratfunc, rat


F2 = ff.make_field(2)
F3 = ff.make_field(3)
F4 = ff.make_field(2, 2)
F5 = ff.make_field(5)


def _ident(field, n):
    one, zero = pr.rat_one(field), pr.rat_zero(field)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


class TestDeterminant:
    def test_identity(self):
        assert la.determinant(_ident(F5, 3)) == pr.rat_one(F5)

    def test_2x2_formula(self):
        x = pr.rat_x(F3)
        one = pr.rat_one(F3)
        d = la.determinant([[x, one], [one, x]])
        assert d == rat(F3, [2, 0, 1])  # x^2 - 1 = x^2 + 2

    def test_matrix_unit_gram(self):
        # tr(E_ij E_kl) = delta_jk delta_il on the basis 11,12,21,22: the
        # permutation matrix of the (12)(21) swap has determinant -1
        one, zero = pr.rat_one(F3), pr.rat_zero(F3)
        units = [(0, 0), (0, 1), (1, 0), (1, 1)]
        g = [
            [one if (j == k and i == l) else zero for (k, l) in units]
            for (i, j) in units
        ]
        assert la.determinant(g) == pr.rat_zero(F3) - pr.rat_one(F3)

    def test_not_square(self):
        with pytest.raises(NotSquare):
            la.determinant([[pr.rat_one(F3), pr.rat_one(F3)]])

    def test_multiplicative(self):
        rnd = random.Random(5)
        for _ in range(12):
            a = [[rand_ratfunc(F3, rnd, 2) for _ in range(3)] for _ in range(3)]
            b = [[rand_ratfunc(F3, rnd, 2) for _ in range(3)] for _ in range(3)]
            assert la.determinant(la.mat_mul(a, b)) == la.determinant(a) * la.determinant(b)


class TestKernel:
    def test_identity_kernel_empty(self):
        assert la.kernel(_ident(F3, 3)) == []

    def test_zero_matrix(self):
        zero = pr.rat_zero(F3)
        k = la.kernel([[zero, zero], [zero, zero]])
        assert len(k) == 2

    def test_single_relation(self):
        one = pr.rat_one(F2)
        x = pr.rat_x(F2)
        k = la.kernel([[one, x]])
        assert len(k) == 1
        # the kernel vector spans (x, 1) over F_2(x)
        v = k[0]
        assert v[0] * one + v[1] * x == pr.rat_zero(F2)
        assert v[1]

    def test_kernel_properties(self):
        rnd = random.Random(7)
        for _ in range(15):
            rows = [[rand_ratfunc(F5, rnd, 2) for _ in range(4)] for _ in range(rnd.randrange(1, 4))]
            basis = la.kernel(rows)
            for v in basis:
                out = la.mat_vec(rows, v)
                assert not any(out)
            assert len(basis) + la.rank(rows) == 4


class TestSolve:
    def test_identity(self):
        b = [rat(F3, [1]), rat(F3, [0, 1])]
        assert la.solve(_ident(F3, 2), b) == b

    def test_no_solution(self):
        one, zero = pr.rat_one(F2), pr.rat_zero(F2)
        assert la.solve([[one, one], [one, one]], [one, zero]) is None

    def test_scalar_inverse(self):
        x = pr.rat_x(F3)
        sol = la.solve([[x]], [pr.rat_one(F3)])
        assert sol == [rat(F3, [1], [0, 1])]

    def test_solution_satisfies_system(self):
        rnd = random.Random(9)
        for _ in range(20):
            rows = [[rand_ratfunc(F3, rnd, 2) for _ in range(3)] for _ in range(3)]
            b = [rand_ratfunc(F3, rnd, 2) for _ in range(3)]
            sol = la.solve(rows, b)
            if sol is not None:
                assert la.mat_vec(rows, sol) == b


def test_inverse():
    rnd = random.Random(11)
    for _ in range(10):
        rows = [[rand_ratfunc(F5, rnd, 2) for _ in range(3)] for _ in range(3)]
        inv = la.inverse(rows)
        if inv is None:
            assert not la.determinant([list(r) for r in rows])
            continue
        assert la.mat_mul(rows, inv) == _ident(F5, 3)


class TestCharpolyBerkowitz:
    def test_2x2_over_polys(self):
        cp = la.charpoly_berkowitz(
            [[Poly(F3, [0, 1]), Poly(F3, [1])], [Poly(F3, [1]), Poly(F3, [0, 1])]],
            Poly(F3, []),
            Poly(F3, [1]),
        )
        # X^2 - 2x X + (x^2 - 1)
        assert cp == [Poly(F3, [2, 0, 1]), Poly(F3, [0, 1]), Poly(F3, [1])]

    def test_constant_term_is_det(self):
        # det(XI - M) at X = 0 equals (-1)^n det(M)
        rnd = random.Random(13)
        for n in (2, 3, 4):
            rows = [[Poly(F3, [rnd.randrange(3) for _ in range(2)]) for _ in range(n)] for _ in range(n)]
            cp = la.charpoly_berkowitz(rows, Poly(F3, []), Poly(F3, [1]))
            det = la.determinant([[pr.RatFunc(c) for c in row] for row in rows])
            expect = cp[0] if n % 2 == 0 else cp[0].scale(2)
            assert pr.RatFunc(expect) == det
            assert cp[n] == Poly(F3, [1])  # monic


class TestFiniteFieldRoutines:
    def test_ff_kernel_matches_generic(self):
        rnd = random.Random(17)
        for field in (F2, F3, F4):
            for _ in range(10):
                rows = [[rnd.randrange(field.q) for _ in range(4)] for _ in range(3)]
                kern = la.ff_kernel(field, [list(r) for r in rows])
                for v in kern:
                    for r in rows:
                        acc = 0
                        for a, b in zip(r, v):
                            acc = field.add(acc, field.mul(a, b))
                        assert acc == 0
                _, pivots = la.ff_rref(field, [list(r) for r in rows])
                assert len(kern) == 4 - len(pivots)

    def test_ff_solve_and_matinv(self):
        rnd = random.Random(19)
        for field in (F3, F4):
            for _ in range(10):
                rows = [[rnd.randrange(field.q) for _ in range(3)] for _ in range(3)]
                inv = la.ff_matinv(field, rows)
                if inv is None:
                    continue
                for i in range(3):
                    for j in range(3):
                        acc = 0
                        for k in range(3):
                            acc = field.add(acc, field.mul(rows[i][k], inv[k][j]))
                        assert acc == (1 if i == j else 0)

    def test_planes_rref_and_kernel(self):
        rnd = random.Random(23)
        for field in (F3, F4):
            rows = [[rnd.randrange(field.q) for _ in range(6)] for _ in range(4)]
            arr = field.to_planes(np.array(rows))
            kern = la.planes_kernel(field, arr)
            kern_ref = la.ff_kernel(field, [list(r) for r in rows])
            assert kern.shape[0] == len(kern_ref)
            for t in range(kern.shape[0]):
                vec = field.from_planes(kern[t]).tolist()
                for r in rows:
                    acc = 0
                    for a, b in zip(r, vec):
                        acc = field.add(acc, field.mul(a, b))
                    assert acc == 0

    def test_planes_scale(self):
        for field in (F3, F4):
            arr = field.to_planes(np.arange(field.q))
            for c in range(field.q):
                out = la.planes_scale(field, arr, c)
                got = field.from_planes(out).tolist()
                assert got == [field.mul(a, c) for a in range(field.q)]


def test_matrix_class():
    m = la.Matrix(2, 2, [1, 2, 3, 4])
    assert m.at(1, 0) == 3
    assert m.row(0) == [1, 2]
    assert la.Matrix.from_rows([[1, 2], [3, 4]]) == m
