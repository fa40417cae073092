import pytest

from fqxsplit import ff
from fqxsplit.errors import NotPrime, Reducible


def test_prime_field_axioms():
    F = ff.make_field(2, 1)
    assert F.add(1, 1) == 0
    assert F.mul(1, 1) == 1
    a = F.elem(1)
    assert (a + a).val == 0


def test_f9_default_modulus_is_irreducible():
    F = ff.make_field(3, 2)
    # brute-force root search over F_3: y^2 + 1 has no root
    assert F.modulus == [1, 0, 1]
    for c in range(3):
        assert (c * c + 1) % 3 != 0


def test_explicit_modulus_f9():
    F = ff.make_field(3, 2, [1, 0, 1])
    y = F.encode([0, 1])
    assert F.mul(y, y) == F.encode([2, 0])  # y^2 = -1


def test_reducible_modulus_rejected():
    # y^2 + 1 = (y+1)^2 over F_2
    with pytest.raises(Reducible):
        ff.make_field(2, 2, [1, 0, 1])


def test_composite_characteristic_rejected():
    with pytest.raises(NotPrime):
        ff.make_field(4, 1)
    with pytest.raises(NotPrime):
        ff.make_field(1, 1)


def test_pth_root_fixed_points():
    for F in (ff.make_field(2), ff.make_field(3, 2), ff.make_field(5)):
        assert F.pth_root(0) == 0
        assert F.pth_root(1) == 1


def test_pth_root_f4_exhaustive():
    F = ff.make_field(2, 2)  # F_2[y]/(y^2+y+1)
    y = F.encode([0, 1])
    # exhaustive check over all four elements: the root of y is y+1
    root = None
    for b in range(4):
        if F.mul(b, b) == y:
            root = b
    assert root == F.add(y, 1)
    assert ff.pth_root(F.elem(y)).val == root


def test_pth_root_prime_field_identity():
    F = ff.make_field(3)
    assert F.pth_root(2) == 2  # 2^3 = 8 = 2 mod 3


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1), (2, 2), (3, 2), (2, 3), (5, 1), (3, 4)])
def test_frobenius_additivity_exhaustive(p, e):
    F = ff.make_field(p, e)
    if F.q <= 81:
        pairs = [(a, b) for a in range(F.q) for b in range(F.q)]
    else:
        import random

        rnd = random.Random(5)
        pairs = [(rnd.randrange(F.q), rnd.randrange(F.q)) for _ in range(500)]
    for a, b in pairs:
        assert F.pow_(F.add(a, b), p) == F.add(F.pow_(a, p), F.pow_(b, p))


@pytest.mark.parametrize("p,e", [(2, 2), (3, 2), (5, 1), (2, 4)])
def test_pth_root_is_inverse_frobenius_bijection(p, e):
    F = ff.make_field(p, e)
    seen = set()
    for a in range(F.q):
        r = F.pth_root(a)
        assert F.pow_(r, p) == a
        seen.add(r)
    assert len(seen) == F.q


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1), (2, 2), (3, 2), (5, 1)])
def test_multiplicative_order(p, e):
    F = ff.make_field(p, e)
    for a in range(1, F.q):
        assert F.pow_(a, F.q - 1) == 1


def test_field_elem_serialization_roundtrip():
    F = ff.make_field(3, 2)
    for v in range(9):
        coeffs = F.elem(v).coeffs
        assert len(coeffs) == 2 and all(0 <= c < 3 for c in coeffs)
        assert F.encode(coeffs) == v


def test_field_elem_operators():
    F = ff.make_field(5)
    a, b = F.elem(3), F.elem(4)
    assert (a * b).val == 2
    assert (a / b).val == F.mul(3, F.inv(4))
    assert (-a).val == 2
    assert (a - a).val == 0
    assert (a**4).val == 1


def test_planes_roundtrip():
    import numpy as np

    F = ff.make_field(3, 2)
    arr = np.arange(9)
    planes = F.to_planes(arr)
    assert planes.shape == (9, 2)
    back = F.from_planes(planes)
    assert (back == arr).all()


def test_cmat_matches_scalar_multiplication():
    import numpy as np

    F = ff.make_field(2, 2)
    for c in range(4):
        cm = F.cmat(c)
        for a in range(4):
            digs = F.to_planes(np.array(a))
            out = (digs @ cm) % 2
            assert int(F.from_planes(out)) == F.mul(a, c)
