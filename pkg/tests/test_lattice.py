import random

import pytest

from fqxsplit import ff, lattice as lat, linalg as la, polyrat as pr
from fqxsplit.errors import Dependent, NotFullRank, NotReduced
from fqxsplit.lattice import LatticeBasis
from fqxsplit.polyrat import NEG_INF, Poly, RatFunc

from conftest import rat


F2 = ff.make_field(2)
F3 = ff.make_field(3)
F5 = ff.make_field(5)


def std_basis(field, m):
    one, zero = pr.rat_one(field), pr.rat_zero(field)
    return [[one if i == j else zero for i in range(m)] for j in range(m)]


class TestOrthogonalityDefect:
    def test_standard_basis(self):
        assert lat.orthogonality_defect(std_basis(F3, 2)) == 0

    def test_shear(self):
        one, zero, x = pr.rat_one(F3), pr.rat_zero(F3), pr.rat_x(F3)
        assert lat.orthogonality_defect([[one, zero], [x, one]]) == 1

    def test_balanced(self):
        one, x = pr.rat_one(F3), pr.rat_x(F3)
        assert lat.orthogonality_defect([[x, one], [one, x]]) == 0

    def test_dependent_raises(self):
        one = pr.rat_one(F3)
        with pytest.raises(Dependent):
            lat.orthogonality_defect([[one, one], [one, one]])


class TestReduceBasis:
    def test_shear_reduces(self):
        one, zero, x = pr.rat_one(F3), pr.rat_zero(F3), pr.rat_x(F3)
        basis = LatticeBasis(2, [[one, zero], [x, one]])
        red, cert = lat.reduce_basis(basis)
        assert cert.od_before == 1 and cert.od_after == 0
        assert lat.orthogonality_defect(red.vectors) == 0
        # transform is unimodular and reproduces the new basis
        t = cert.transform
        det = la.determinant([[RatFunc(t[i][j]) for j in range(2)] for i in range(2)])
        assert det.num.deg == 0 and det.den.deg == 0
        for j in range(2):
            for c in range(2):
                acc = zero
                for i in range(2):
                    acc = acc + basis.vectors[i][c] * RatFunc(t[i][j])
                assert acc == red.vectors[j][c]

    def test_reduced_input_fixed(self):
        v1 = [rat(F3, [1], [0, 1]), pr.rat_zero(F3)]
        v2 = [pr.rat_zero(F3), pr.rat_x(F3)]
        red, cert = lat.reduce_basis(LatticeBasis(2, [v1, v2]))
        assert cert.od_before == 0
        assert red.vectors == [v1, v2]

    def test_standard_basis_fixed(self):
        red, cert = lat.reduce_basis(LatticeBasis(2, std_basis(F3, 2)))
        assert red.vectors == std_basis(F3, 2)
        assert cert.od_before == cert.od_after == 0


class TestReduceGenerators:
    def test_redundant_generator(self):
        one, zero, x = pr.rat_one(F3), pr.rat_zero(F3), pr.rat_x(F3)
        g = lat.reduce_generators([[one, zero], [x, zero], [zero, one]])
        assert len(g.vectors) == 2
        assert lat.orthogonality_defect(g.vectors) == 0
        assert lat.coordinates(g.vectors, [one, zero]) is not None

    def test_coprime_combination(self):
        one, zero, x = pr.rat_one(F2), pr.rat_zero(F2), pr.rat_x(F2)
        g = lat.reduce_generators([[x, zero], [x + one, zero], [zero, one]])
        # gcd(x, x+1) = 1, so the module is all of F_2[x]^2
        for target in std_basis(F2, 2):
            assert lat.coordinates(g.vectors, target) is not None
        assert sorted(lat.vector_valuation(v) for v in g.vectors) == [0, 0]

    def test_reduced_basis_passthrough(self):
        vecs = std_basis(F3, 2)
        g = lat.reduce_generators(vecs)
        assert lat.orthogonality_defect(g.vectors) == 0
        for v in vecs:
            assert lat.coordinates(g.vectors, v) is not None

    def test_not_full_rank(self):
        one, zero = pr.rat_one(F3), pr.rat_zero(F3)
        with pytest.raises(NotFullRank):
            lat.reduce_generators([[one, zero], [one + one, zero]])

    def test_zero_vectors_dropped(self):
        zero = pr.rat_zero(F3)
        vecs = [[zero, zero]] + std_basis(F3, 2)
        g = lat.reduce_generators(vecs)
        assert len(g.vectors) == 2


class TestBoundedElements:
    def test_standard_k0(self):
        be = lat.bounded_elements(LatticeBasis(2, std_basis(F3, 2)), 0)
        assert be == std_basis(F3, 2)

    def test_standard_k1(self):
        be = lat.bounded_elements(LatticeBasis(2, std_basis(F3, 2)), 1)
        assert len(be) == 4
        x = pr.rat_x(F3)
        assert be[2] == [x * c for c in std_basis(F3, 2)[0]]

    def test_mixed_valuations(self):
        v1 = [rat(F3, [1], [0, 1]), pr.rat_zero(F3)]
        v2 = [pr.rat_zero(F3), pr.rat_x(F3)]
        be = lat.bounded_elements(LatticeBasis(2, [v1, v2]), 0)
        assert len(be) == 2
        assert be[0] == v1
        assert be[1] == [pr.rat_one(F3), pr.rat_zero(F3)]

    def test_requires_reduced(self):
        one, zero, x = pr.rat_one(F3), pr.rat_zero(F3), pr.rat_x(F3)
        with pytest.raises(NotReduced):
            lat.bounded_elements(LatticeBasis(2, [[one, zero], [x, one]]), 0)

    def test_spans_all_small_elements(self):
        # random lattice element of valuation <= k is an F_q-combination
        rnd = random.Random(3)
        for _ in range(20):
            m = rnd.randrange(2, 4)
            vecs = _random_basis(F3, rnd, m, 3)
            if vecs is None:
                continue
            red, _ = lat.reduce_basis(LatticeBasis(m, vecs))
            k = rnd.randrange(0, 3)
            be = lat.bounded_elements(red, k)
            # sample a random element of valuation <= k via its description
            combo = [pr.rat_zero(F3) for _ in range(m)]
            for v in red.vectors:
                vv = lat.vector_valuation(v)
                room = int(k - vv)
                if room < 0:
                    continue
                a = Poly(F3, [rnd.randrange(3) for _ in range(room + 1)])
                for c in range(m):
                    combo[c] = combo[c] + RatFunc(a) * v[c]
            if lat.vector_valuation(combo) > k:
                continue
            # membership in the F_q-span of the bounded elements: every
            # monomial x^j c_i appearing in the coordinates must be listed
            co = lat.coordinates(red.vectors, combo)
            assert co is not None
            for i, coeff in enumerate(co):
                vv = lat.vector_valuation(red.vectors[i])
                for j, c in enumerate(coeff.coeffs):
                    if c:
                        assert j + vv <= k


def _random_basis(field, rnd, m, maxdeg):
    vecs = [
        [RatFunc(Poly(field, [rnd.randrange(field.q) for _ in range(rnd.randrange(1, maxdeg + 2))])) for _ in range(m)]
        for _ in range(m)
    ]
    try:
        lat.orthogonality_defect(vecs)
    except Dependent:
        return None
    return vecs


class TestCoefficientBound:
    def test_lemma_inequality(self):
        rnd = random.Random(7)
        checked = 0
        while checked < 120:
            m = rnd.randrange(2, 5)
            field = (F2, F3, F5)[checked % 3]
            vecs = _random_basis(field, rnd, m, 3)
            if vecs is None:
                continue
            od = lat.orthogonality_defect(vecs)
            alphas = [Poly(field, [rnd.randrange(field.q) for _ in range(rnd.randrange(4))]) for _ in range(m)]
            combo = [pr.rat_zero(field) for _ in range(m)]
            for a, v in zip(alphas, vecs):
                for c in range(m):
                    combo[c] = combo[c] + RatFunc(a) * v[c]
            va = lat.vector_valuation(combo)
            for a, v in zip(alphas, vecs):
                if a:
                    assert a.deg <= va + od - lat.vector_valuation(v)
            checked += 1


def test_coordinates_membership():
    one, zero, x = pr.rat_one(F3), pr.rat_zero(F3), pr.rat_x(F3)
    basis = std_basis(F3, 2)
    co = lat.coordinates(basis, [x * x + one, x])
    assert co == [Poly(F3, [1, 0, 1]), Poly(F3, [0, 1])]
    assert lat.coordinates(basis, [rat(F3, [1], [0, 1]), zero]) is None


def test_serialization_roundtrip():
    basis = LatticeBasis(2, [[rat(F3, [1], [0, 1]), pr.rat_zero(F3)], [pr.rat_zero(F3), pr.rat_x(F3)]])
    data = lat.lattice_to_json(basis)
    back = lat.lattice_from_json(F3, data)
    assert back.m == 2 and back.vectors == basis.vectors
