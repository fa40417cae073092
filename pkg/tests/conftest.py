import random

import pytest

from fqxsplit import algebra as algmod
from fqxsplit import ff, finalg, linalg, polyrat
from fqxsplit.cli import gen_instance
from fqxsplit.polyrat import Poly, RatFunc


@pytest.fixture(scope="session")
def F2():
    return ff.make_field(2)


@pytest.fixture(scope="session")
def F3():
    return ff.make_field(3)


@pytest.fixture(scope="session")
def F4():
    return ff.make_field(2, 2)


@pytest.fixture(scope="session")
def F5():
    return ff.make_field(5)


def rat(field, num, den=None):
    return RatFunc(Poly(field, num), Poly(field, den) if den is not None else None)


def rand_poly(field, rnd, max_len):
    return Poly(field, [rnd.randrange(field.q) for _ in range(rnd.randrange(max_len + 1))])


def rand_ratfunc(field, rnd, max_len=4):
    num = rand_poly(field, rnd, max_len)
    den = Poly(field, [])
    while not den:
        den = Poly(
            field, [rnd.randrange(field.q) for _ in range(rnd.randrange(1, max_len + 1))]
        )
    return RatFunc(num, den)


def subalgebra_gamma(A, basis_elems):
    """Structure constants of a subalgebra of A on the given basis."""
    m = len(basis_elems)
    mat = [[basis_elems[j].coords[i] for j in range(m)] for i in range(len(A.basis_elem(0).coords))]
    gamma = []
    for i in range(m):
        block = []
        for j in range(m):
            prod = basis_elems[i] * basis_elems[j]
            sol = linalg.solve(mat, prod.coords)
            assert sol is not None, "basis is not multiplicatively closed"
            block.append(sol)
        gamma.append(block)
    return gamma


def matrix_subalgebra(field, mats, nsize):
    """FiniteAlgebra from the multiplicative closure of matrices in M_nsize."""

    def flat(M):
        return [M[i][j] for i in range(nsize) for j in range(nsize)]

    def matmul(X, Y):
        out = [[0] * nsize for _ in range(nsize)]
        for i in range(nsize):
            for j in range(nsize):
                acc = 0
                for k in range(nsize):
                    acc = field.add(acc, field.mul(X[i][k], Y[k][j]))
                out[i][j] = acc
        return out

    basis = finalg.span_basis(field, [flat(M) for M in mats])
    while True:
        asmat = [[[b[i * nsize + j] for j in range(nsize)] for i in range(nsize)] for b in basis]
        prods = [flat(matmul(X, Y)) for X in asmat for Y in asmat]
        new = finalg.span_basis(field, [list(b) for b in basis] + prods)
        if len(new) == len(basis):
            break
        basis = new
    solver = finalg._Solver(field, [list(b) for b in basis])
    asmat = [[[b[i * nsize + j] for j in range(nsize)] for i in range(nsize)] for b in basis]
    d = len(basis)
    gamma = [
        [solver.solve(flat(matmul(asmat[a], asmat[b]))) for b in range(d)]
        for a in range(d)
    ]
    return finalg.FiniteAlgebra(field, gamma), basis


def random_unital_subalgebra(field, rnd, nsize=3, max_dim=5):
    """Random unital matrix subalgebra of dimension <= max_dim, or None."""
    mats = [[[1 if i == j else 0 for j in range(nsize)] for i in range(nsize)]]
    for _ in range(rnd.randrange(1, 3)):
        mats.append([[rnd.randrange(field.q) for _ in range(nsize)] for _ in range(nsize)])
    B, _basis = matrix_subalgebra(field, mats, nsize)
    if B.dim > max_dim:
        return None
    return B


def enumerate_subspaces(field, d):
    """All subspaces of F_q^d as lists of RREF basis rows."""
    from itertools import combinations, product

    out = [[]]
    q = field.q
    for k in range(1, d + 1):
        for pivots in combinations(range(d), k):
            freepos = []
            for r, pc in enumerate(pivots):
                for c in range(pc + 1, d):
                    if c not in pivots:
                        freepos.append((r, c))
            for vals in product(range(q), repeat=len(freepos)):
                M = [[0] * d for _ in range(k)]
                for r, pc in enumerate(pivots):
                    M[r][pc] = 1
                for (r, c), v in zip(freepos, vals):
                    M[r][c] = v
                out.append(M)
    return out


def brute_force_radical(B):
    """Largest nilpotent two-sided ideal by exhausting all subspaces."""
    best = []
    for sub in enumerate_subspaces(B.base, B.dim):
        if len(sub) <= len(best):
            continue
        solver = finalg._Solver(B.base, [list(v) for v in sub])
        is_ideal = True
        for v in sub:
            for i in range(B.dim):
                if (
                    solver.solve(B.mul(v, B.unit_vec(i))) is None
                    or solver.solve(B.mul(B.unit_vec(i), v)) is None
                ):
                    is_ideal = False
                    break
            if not is_ideal:
                break
        if not is_ideal:
            continue
        # nilpotency of the ideal: the chain I, I*I, I*I*I, ... must die
        cur = [list(v) for v in sub]
        for _ in range(B.dim + 1):
            cur = finalg.span_basis(B.base, [B.mul(u, v) for u in cur for v in sub])
            if not cur:
                break
        if cur:
            continue
        best = sub
    return best
