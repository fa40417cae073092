"""Finite-dimensional algebras over a finite field.

Used for the intersection algebra C and for order quotients Lambda/g*Lambda.
Provides the Jacobson radical (characteristic-p safe), Wedderburn-Malcev
complements, complete systems of orthogonal primitive idempotents,
idempotent lifting, and a residue-field wrapper F_q[x]/(g) satisfying the
same arithmetic protocol as `ff.Field`.

Elements are plain int vectors over the base field's encoding; all linear
algebra goes through `linalg`'s finite-field routines.
"""

from __future__ import annotations

import random

from . import linalg, polyrat
from .errors import (
    NotIdempotentModRadical,
    NotUnital,
    ValidationError,
    VerificationFailure,
)
from .polyrat import Poly


class ResidueField:
    """F_q[x]/(g) for monic irreducible g, as a field protocol object.

    Elements are ints encoding base-q digit vectors of length deg g.
    """

    planes_ok = False

    def __init__(self, base, g: Poly):
        if g.deg < 1 or g.lc() != 1:
            raise ValidationError("residue field modulus must be monic of degree >= 1")
        self.base = base
        self.g = g
        self.deg = int(g.deg)
        self.p = base.p
        self.q = base.q**self.deg
        self.e_total = getattr(base, "e", 1) * self.deg

    def decode(self, a: int):
        digs = []
        for _ in range(self.deg):
            a, d = divmod(a, self.base.q)
            digs.append(d)
        return digs

    def encode(self, digs) -> int:
        v = 0
        for c in reversed(list(digs)):
            v = v * self.base.q + int(c)
        return v

    def to_poly(self, a: int) -> Poly:
        return Poly(self.base, self.decode(a))

    def from_poly(self, f: Poly) -> int:
        f = f % self.g
        digs = f.coeffs + [0] * (self.deg - len(f.coeffs))
        return self.encode(digs)

    def add(self, a: int, b: int) -> int:
        da, db = self.decode(a), self.decode(b)
        return self.encode([self.base.add(x, y) for x, y in zip(da, db)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def neg(self, a: int) -> int:
        return self.encode([self.base.neg(x) for x in self.decode(a)])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.from_poly(self.to_poly(a) * self.to_poly(b))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero residue")
        d, s, _t = polyrat.extended_gcd(self.to_poly(a), self.g)
        if d.deg != 0:
            raise ValidationError("residue field modulus is not irreducible")
        return self.from_poly(s.scale(self.base.inv(d.coeffs[0])))

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow_(self, a: int, n: int) -> int:
        if n == 0:
            return 1
        if a == 0:
            return 0
        n %= self.q - 1
        r = 1
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def pth_root(self, a: int) -> int:
        return self.pow_(a, self.q // self.p)

    def __eq__(self, other):
        return (
            isinstance(other, ResidueField)
            and self.base == other.base
            and self.g == other.g
        )

    def __hash__(self):
        return hash((self.base, tuple(self.g.coeffs)))

    def __repr__(self):
        return f"ResidueField({self.base}, deg {self.deg})"


class FiniteAlgebra:
    """Associative algebra over a finite field, given by structure constants.

    `embed`, when present, maps basis indices to elements of the ambient
    F_q(x)-algebra (used for the intersection algebra C).
    """

    def __init__(self, base, gamma, embed=None, identity=None):
        self.base = base
        self.dim = len(gamma)
        self.gamma = gamma
        self.embed = embed
        self._identity = identity
        self._radical = None

    # -- element helpers ---------------------------------------------------

    def zero_vec(self):
        return [0] * self.dim

    def unit_vec(self, i: int):
        v = [0] * self.dim
        v[i] = 1
        return v

    def add(self, u, v):
        return [self.base.add(a, b) for a, b in zip(u, v)]

    def sub(self, u, v):
        return [self.base.sub(a, b) for a, b in zip(u, v)]

    def scale(self, c: int, u):
        mul = self.base.mul
        return [mul(c, a) for a in u]

    def mul(self, u, v):
        fld = self.base
        out = [0] * self.dim
        add, mul = fld.add, fld.mul
        for i, ui in enumerate(u):
            if not ui:
                continue
            gi = self.gamma[i]
            for j, vj in enumerate(v):
                if not vj:
                    continue
                c = mul(ui, vj)
                row = gi[j]
                for k, g in enumerate(row):
                    if g:
                        out[k] = add(out[k], mul(c, g))
        return out

    def left_mult_matrix(self, u):
        """Rows of the matrix of v -> u*v on the standard basis."""
        cols = [self.mul(u, self.unit_vec(j)) for j in range(self.dim)]
        return [[cols[j][k] for j in range(self.dim)] for k in range(self.dim)]

    def identity(self):
        if self._identity is None:
            rows = []
            rhs = []
            for i in range(self.dim):
                for k in range(self.dim):
                    rows.append([self.gamma[j][i][k] for j in range(self.dim)])
                    rhs.append(1 if k == i else 0)
            sol = linalg.ff_solve(self.base, rows, rhs)
            if sol is None:
                raise NotUnital("finite algebra has no identity")
            for i in range(self.dim):
                if self.mul(self.unit_vec(i), sol) != self.unit_vec(i):
                    raise NotUnital("left identity is not two-sided")
            self._identity = sol
        return self._identity

    def has_identity(self) -> bool:
        try:
            self.identity()
            return True
        except NotUnital:
            return False

    def random_vec(self, rng: random.Random):
        return [rng.randrange(self.base.q) for _ in range(self.dim)]

    def embed_elem(self, vec):
        """Image in the ambient algebra of a coefficient vector over F_q."""
        if self.embed is None:
            raise ValidationError("this finite algebra has no ambient embedding")
        acc = None
        for c, img in zip(vec, self.embed):
            if not c:
                continue
            term = _scale_ambient(img, c)
            acc = term if acc is None else acc + term
        if acc is None:
            acc = self.embed[0].algebra.zero()
        return acc


def _scale_ambient(elem, c: int):
    fld = elem.algebra.field
    return polyrat.RatFunc(polyrat.constant(fld, c)) * elem


# -- linear solver helper --------------------------------------------------------


class _Solver:
    """Repeated solving of C x = v for a fixed column set C over a finite field."""

    def __init__(self, field, columns):
        self.field = field
        self.ncols = len(columns)
        dim = len(columns[0]) if columns else 0
        aug = [[columns[j][i] for j in range(self.ncols)] + _unit_row(dim, i) for i in range(dim)]
        self.rows, self.pivots = linalg.ff_rref(field, aug)
        self.dim = dim

    def solve(self, v):
        """Coordinates of v in the columns, or None."""
        fld = self.field
        x = [0] * self.ncols
        add, mul = fld.add, fld.mul
        for r, pc in enumerate(self.pivots):
            acc = 0
            row = self.rows[r]
            for i in range(self.dim):
                if v[i]:
                    acc = add(acc, mul(row[self.ncols + i], v[i]))
            if pc < self.ncols:
                x[pc] = acc
            elif acc:
                return None
        # rows beyond the pivots encode consistency constraints
        for r in range(len(self.pivots), self.dim):
            acc = 0
            row = self.rows[r]
            for i in range(self.dim):
                if v[i]:
                    acc = add(acc, mul(row[self.ncols + i], v[i]))
            if acc:
                return None
        return x


def _unit_row(n, i):
    row = [0] * n
    row[i] = 1
    return row


def span_basis(field, vectors):
    """Row-reduced basis of the span of the given int vectors."""
    if not vectors:
        return []
    work = [list(v) for v in vectors]
    rows, pivots = linalg.ff_rref(field, work)
    return [rows[i] for i in range(len(pivots))]


# -- radical ------------------------------------------------------------------------


def _charpoly_coeff(field, rows, j):
    """Coefficient of lambda^(N-j) in det(lambda I - M): (-1)^j sum of j-minors."""
    n = len(rows)
    if j == 0:
        return 1
    total = 0
    for subset in _combinations(n, j):
        sub = [[rows[a][b] for b in subset] for a in subset]
        total = field.add(total, _ff_det(field, sub))
    if j % 2:
        total = field.neg(total)
    return total


def _combinations(n, k):
    # index subsets in lexicographic order
    idx = list(range(k))
    while True:
        yield tuple(idx)
        for i in reversed(range(k)):
            if idx[i] != i + n - k:
                break
        else:
            return
        idx[i] += 1
        for j in range(i + 1, k):
            idx[j] = idx[j - 1] + 1


def _ff_det(field, rows):
    n = len(rows)
    rows = [list(r) for r in rows]
    det = 1
    mul, add, neg, inv = field.mul, field.add, field.neg, field.inv
    for col in range(n):
        piv = None
        for i in range(col, n):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = neg(det)
        det = mul(det, rows[col][col])
        ic = inv(rows[col][col])
        for i in range(col + 1, n):
            if rows[i][col]:
                f = neg(mul(ic, rows[i][col]))
                rows[i] = [add(v, mul(f, w)) for v, w in zip(rows[i], rows[col])]
    return det


def radical(B: FiniteAlgebra):
    """F-basis of the largest nilpotent two-sided ideal.

    Runs the descending chain of coefficient-of-characteristic-polynomial
    conditions: at stage i the surviving subspace is cut by
    T_i(ab) = 0 where T_i reads the coefficient at lambda^(N - p^i) of the
    left regular matrix and a p^i-fold inverse Frobenius makes the
    condition F-linear.  Works in any characteristic.
    """
    if B._radical is not None:
        return [list(v) for v in B._radical]
    work = B
    strip = False
    if not B.has_identity():
        work = unital_hull(B)
        strip = True
    fld = work.base
    N = work.dim
    basis = [work.unit_vec(i) for i in range(N)]
    p = fld.p
    # left-multiplication matrices of the standard basis, combined linearly
    lmats = [work.left_mult_matrix(work.unit_vec(i)) for i in range(N)]
    add, mul = fld.add, fld.mul

    def lmat(vec):
        out = [[0] * N for _ in range(N)]
        for idx, c in enumerate(vec):
            if not c:
                continue
            li = lmats[idx]
            for r in range(N):
                lr = li[r]
                orow = out[r]
                for cc in range(N):
                    if lr[cc]:
                        orow[cc] = add(orow[cc], mul(c, lr[cc]))
        return out

    i = 0
    pi = 1
    while pi <= N and basis:
        # condition matrix: rows (t) hold T'_i(a_s b_t) over the surviving basis
        rows = []
        for t, bt in enumerate(basis):
            row = []
            for s, a_s in enumerate(basis):
                prod = work.mul(a_s, bt)
                c = lmat(prod)
                coeff = _charpoly_coeff(fld, c, pi)
                for _ in range(i):
                    coeff = fld.pth_root(coeff)
                row.append(coeff)
            rows.append(row)
        kern = linalg.ff_kernel(fld, rows) if rows else []
        new_basis = []
        for z in kern:
            vec = work.zero_vec()
            for c, b in zip(z, basis):
                if c:
                    vec = work.add(vec, work.scale(c, b))
            new_basis.append(vec)
        basis = span_basis(fld, new_basis)
        i += 1
        pi *= p
    if strip:
        for v in basis:
            if v[0]:
                raise VerificationFailure("radical escaped the non-unital part")
        basis = [v[1:] for v in basis]
    result = span_basis(B.base, basis)
    B._radical = [list(v) for v in result]
    return result


def unital_hull(B: FiniteAlgebra) -> FiniteAlgebra:
    """B with an identity adjoined as the new first basis vector."""
    d = B.dim + 1
    gamma = [[[0] * d for _ in range(d)] for _ in range(d)]
    for j in range(d):
        gamma[0][j][j] = 1
    for i in range(1, d):
        gamma[i][0][i] = 1
        for j in range(1, d):
            prod = B.gamma[i - 1][j - 1]
            for k in range(B.dim):
                gamma[i][j][k + 1] = prod[k]
    hull = FiniteAlgebra(B.base, gamma)
    hull._identity = hull.unit_vec(0)
    return hull


def quotient_algebra(B: FiniteAlgebra, ideal_vectors):
    """(Q, project, lift) for B / span(ideal_vectors)."""
    fld = B.base
    ibasis = span_basis(fld, ideal_vectors)
    pivots = []
    for row in ibasis:
        for j, v in enumerate(row):
            if v:
                pivots.append(j)
                break
    pivset = set(pivots)
    free = [j for j in range(B.dim) if j not in pivset]

    def project(vec):
        v = list(vec)
        for row, pc in zip(ibasis, pivots):
            c = v[pc]
            if c:
                nc = fld.neg(c)
                v = [fld.add(a, fld.mul(nc, b)) for a, b in zip(v, row)]
        return [v[j] for j in free]

    def lift(qvec):
        v = [0] * B.dim
        for c, j in zip(qvec, free):
            v[j] = c
        return v

    qdim = len(free)
    gamma = [[None] * qdim for _ in range(qdim)]
    for a in range(qdim):
        for b in range(qdim):
            gamma[a][b] = project(B.mul(lift(_unit_row(qdim, a)), lift(_unit_row(qdim, b))))
    Q = FiniteAlgebra(fld, gamma)
    return Q, project, lift


# -- Wedderburn-Malcev complement ----------------------------------------------------


def wm_complement(C: FiniteAlgebra):
    """Basis of a subalgebra B with C = B (+) Rad(C).

    Successive refinement: corrections from the current radical power N are
    solved for so that products close modulo N^2, squaring the modulus each
    round; the final span is an exact subalgebra containing 1.
    """
    fld = C.base
    rad = radical(C)
    if not rad:
        return [C.unit_vec(i) for i in range(C.dim)]
    _q, project, lift = quotient_algebra(C, rad)
    tbasis = [lift(_unit_row(C.dim - len(rad), a)) for a in range(C.dim - len(rad))]
    nbasis = [list(v) for v in rad]
    k = len(tbasis)
    while nbasis:
        n2 = span_basis(
            fld,
            [C.mul(u, v) for u in nbasis for v in nbasis],
        )
        r = len(nbasis)
        # coordinates of N/N^2: solve against [nbasis | n2] and keep the free part
        nsolver = _Solver(fld, [list(v) for v in nbasis] + [list(v) for v in n2])
        decomp = _Solver(fld, [list(v) for v in tbasis] + [list(v) for v in nbasis])

        def mod_n2(vec):
            co = nsolver.solve(vec)
            if co is None:
                raise VerificationFailure("vector not in current radical power")
            return co[:r]

        mu = {}
        rho = {}
        for a in range(k):
            for b in range(k):
                co = decomp.solve(C.mul(tbasis[a], tbasis[b]))
                if co is None:
                    raise VerificationFailure("complement products left the working space")
                mu[a, b] = co[:k]
                rvec = C.zero_vec()
                for c, nv in zip(co[k:], nbasis):
                    if c:
                        rvec = C.add(rvec, C.scale(c, nv))
                rho[a, b] = rvec
        # unknowns: corrections n_a = sum_j y[a][j] nbasis[j]
        nn2 = len(mod_n2(nbasis[0])) if nbasis else 0
        rows = []
        rhs = []
        tn = [[C.mul(tbasis[a], nbasis[j]) for j in range(r)] for a in range(k)]
        nt = [[C.mul(nbasis[j], tbasis[b]) for b in range(k)] for j in range(r)]
        tn_mod = [[mod_n2(tn[a][j]) for j in range(r)] for a in range(k)]
        nt_mod = [[mod_n2(nt[j][b]) for b in range(k)] for j in range(r)]
        nb_mod = [mod_n2(nbasis[j]) for j in range(r)]
        for a in range(k):
            for b in range(k):
                target = mod_n2(rho[a, b])
                for comp in range(nn2):
                    row = [0] * (k * r)
                    for j in range(r):
                        # + t_a n_b term
                        row[b * r + j] = fld.add(row[b * r + j], tn_mod[a][j][comp])
                        # + n_a t_b term
                        row[a * r + j] = fld.add(row[a * r + j], nt_mod[j][b][comp])
                        # - sum_c mu_abc n_c term
                        for c in range(k):
                            if mu[a, b][c]:
                                row[c * r + j] = fld.sub(
                                    row[c * r + j],
                                    fld.mul(mu[a, b][c], nb_mod[j][comp]),
                                )
                    rows.append(row)
                    rhs.append(fld.neg(target[comp]))
        sol = linalg.ff_solve(fld, rows, rhs)
        if sol is None:
            raise VerificationFailure("complement correction system is inconsistent")
        new_t = []
        for a in range(k):
            vec = list(tbasis[a])
            for j in range(r):
                c = sol[a * r + j]
                if c:
                    vec = C.add(vec, C.scale(c, nbasis[j]))
            new_t.append(vec)
        tbasis = new_t
        nbasis = n2
    # exact closure check and identity membership
    solver = _Solver(fld, [list(v) for v in tbasis])
    for a in range(k):
        for b in range(k):
            if solver.solve(C.mul(tbasis[a], tbasis[b])) is None:
                raise VerificationFailure("complement is not closed under multiplication")
    if solver.solve(C.identity()) is None:
        raise VerificationFailure("complement does not contain the identity")
    return tbasis


# -- idempotents -------------------------------------------------------------------


class IdempotentSystem:
    """Complete system of orthogonal primitive idempotents e_1, ..., e_r."""

    __slots__ = ("algebra", "elements")

    def __init__(self, algebra: FiniteAlgebra, elements):
        self.algebra = algebra
        self.elements = [list(e) for e in elements]

    def verify(self):
        B = self.algebra
        total = B.zero_vec()
        for i, e in enumerate(self.elements):
            total = B.add(total, e)
            for j, f in enumerate(self.elements):
                prod = B.mul(e, f)
                expect = e if i == j else B.zero_vec()
                if prod != expect:
                    raise VerificationFailure("idempotent system axioms fail")
        if total != B.identity():
            raise VerificationFailure("idempotent system does not sum to 1")


def _min_poly_vec(B: FiniteAlgebra, u, eps):
    """Minimal polynomial of u in the corner algebra with identity eps."""
    fld = B.base
    powers = [list(eps)]
    cur = list(eps)
    while True:
        cur = B.mul(cur, u)
        solver = _Solver(fld, [list(p) for p in powers])
        co = solver.solve(cur)
        if co is not None:
            coeffs = [fld.neg(c) for c in co] + [1]
            return Poly(fld, coeffs)
        powers.append(list(cur))


def _eval_poly(B: FiniteAlgebra, f: Poly, u, eps):
    """f(u) inside the corner with identity eps (u^0 = eps)."""
    acc = B.zero_vec()
    for c in reversed(f.coeffs):
        acc = B.mul(acc, u)
        if c:
            acc = B.add(acc, B.scale(c, eps))
    return acc


def _corner_basis(B: FiniteAlgebra, e):
    return span_basis(B.base, [B.mul(B.mul(e, B.unit_vec(i)), e) for i in range(B.dim)])


def _center_basis(B: FiniteAlgebra):
    fld = B.base
    rows = []
    for i in range(B.dim):
        left = B.left_mult_matrix(B.unit_vec(i))
        # right multiplication matrix
        cols = [B.mul(B.unit_vec(j), B.unit_vec(i)) for j in range(B.dim)]
        right = [[cols[j][kk] for j in range(B.dim)] for kk in range(B.dim)]
        for kk in range(B.dim):
            rows.append([fld.sub(left[kk][j], right[kk][j]) for j in range(B.dim)])
    kern = linalg.ff_kernel(fld, rows)
    return span_basis(fld, kern)


def central_primitive_idempotents(B: FiniteAlgebra, seed: int = 0):
    """Identities of the simple components of a semisimple algebra.

    Splits the center along factors of minimal polynomials of its basis
    elements (a spanning set of a product of fields always contains an
    element with a reducible minimal polynomial), then a few seeded random
    center elements as a safety net before declaring every block simple.
    """
    fld = B.base
    center = _center_basis(B)
    blocks = [B.identity()]
    rng = random.Random(seed)
    candidates = [list(z) for z in center]
    stable_passes = 0
    while stable_passes < 3:
        split_found = False
        for eps in list(blocks):
            for z in candidates:
                u = B.mul(B.mul(eps, z), eps)
                m = _min_poly_vec(B, u, eps)
                fac = polyrat.factor_poly(m, seed=seed)
                parts = [g for g, _ in fac.factors]
                if len(parts) < 2:
                    continue
                new_eps = []
                for g in parts:
                    big = polyrat.divexact(m, g)
                    d, s, _t = polyrat.extended_gcd(big, g)
                    if d.deg != 0:
                        raise VerificationFailure("center minimal polynomial not squarefree")
                    proj = (s.scale(fld.inv(d.coeffs[0])) * big) % m
                    new_eps.append(_eval_poly(B, proj, u, eps))
                blocks.remove(eps)
                blocks.extend(new_eps)
                split_found = True
                break
            if split_found:
                break
        if split_found:
            stable_passes = 0
            continue
        stable_passes += 1
        extra = B.zero_vec()
        for z in center:
            c = rng.randrange(fld.q)
            if c:
                extra = B.add(extra, B.scale(c, z))
        candidates = [extra] + [list(z) for z in center]
    return blocks


def _find_proper_idempotent(B: FiniteAlgebra, eps, corner, rng: random.Random):
    """A nonzero idempotent strictly under eps in the simple corner, or None."""
    fld = B.base
    if all(B.mul(u, v) == B.mul(v, u) for u in corner for v in corner):
        return None  # commutative simple algebra over a finite field: a field
    for _ in range(400):
        u = B.zero_vec()
        for v in corner:
            c = rng.randrange(fld.q)
            if c:
                u = B.add(u, B.scale(c, v))
        m = _min_poly_vec(B, u, eps)
        if m.deg < 1:
            continue
        fac = polyrat.factor_poly(m, seed=rng.randrange(1 << 30))
        if len(fac.factors) >= 2:
            gpow = _power(fac.factors[0][0], fac.factors[0][1])
            big = polyrat.divexact(m, gpow)
            d, s, _t = polyrat.extended_gcd(big, gpow)
            if d.deg != 0:
                continue
            proj = (s.scale(fld.inv(d.coeffs[0])) * big) % m
            e = _eval_poly(B, proj, u, eps)
            if any(e) and e != eps and B.mul(e, e) == e:
                return e
            continue
        g, mult = fac.factors[0]
        if mult >= 2:
            # nilpotent route: w = g(u)^(mult-1) has square zero
            w = _eval_poly(B, g, u, eps)
            wp = list(eps)
            for _ in range(mult - 1):
                wp = B.mul(wp, w)
            if not any(wp):
                continue
            e = _right_identity_of_left_ideal(B, eps, wp)
            if e is not None and any(e) and e != eps:
                return e
    raise VerificationFailure("failed to split a simple component; input not semisimple?")


def _power(g: Poly, k: int) -> Poly:
    acc = polyrat.one(g.field)
    for _ in range(k):
        acc = acc * g
    return acc


def _right_identity_of_left_ideal(B: FiniteAlgebra, eps, w):
    """Idempotent e with (corner)w = (corner)e, via a right-identity solve."""
    fld = B.base
    lbasis = span_basis(
        fld,
        [B.mul(B.mul(B.mul(eps, B.unit_vec(i)), eps), w) for i in range(B.dim)] + [w],
    )
    if not lbasis:
        return None
    # e in L with x e = x for every basis x of L
    cols = []
    for j in range(len(lbasis)):
        # unknown e = sum_j y_j lbasis[j]; equation rows: x_i e = x_i
        col = []
        for x in lbasis:
            col.extend(B.mul(x, lbasis[j]))
        cols.append(col)
    rhs = []
    for x in lbasis:
        rhs.extend(x)
    rows = [[cols[j][i] for j in range(len(lbasis))] for i in range(len(rhs))]
    sol = linalg.ff_solve(fld, rows, rhs)
    if sol is None:
        return None
    e = B.zero_vec()
    for c, v in zip(sol, lbasis):
        if c:
            e = B.add(e, B.scale(c, v))
    if B.mul(e, e) != e:
        return None
    return e


def primitive_idempotent_system(B: FiniteAlgebra, seed: int = 0) -> IdempotentSystem:
    """Complete orthogonal system of primitive idempotents of a semisimple B."""
    rng = random.Random(seed)
    out = []
    stack = list(central_primitive_idempotents(B, seed=seed))
    while stack:
        eps = stack.pop(0)
        corner = _corner_basis(B, eps)
        e = _find_proper_idempotent(B, eps, corner, rng)
        if e is None:
            out.append(eps)
            continue
        rest = B.sub(eps, e)
        stack.insert(0, rest)
        stack.insert(0, e)
    system = IdempotentSystem(B, out)
    system.verify()
    return system


def lift_idempotent(C: FiniteAlgebra, ebar):
    """Idempotent of C congruent to ebar modulo Rad(C).

    Newton refinement e <- e + (1 - 2e)(e^2 - e), which squares the defect
    t = e^2 - e in every characteristic.
    """
    fld = C.base
    rad = radical(C)
    rad_solver = _Solver(fld, [list(v) for v in rad]) if rad else None
    e = list(ebar)
    t = C.sub(C.mul(e, e), e)
    if any(t):
        if rad_solver is None or rad_solver.solve(t) is None:
            raise NotIdempotentModRadical("element is not idempotent modulo the radical")
    oneC = C.identity()
    for _ in range(C.dim + 2):
        t = C.sub(C.mul(e, e), e)
        if not any(t):
            break
        corr = C.sub(oneC, C.scale(fld.add(1, 1), e))
        e = C.add(e, C.mul(corr, t))
    else:
        raise NotIdempotentModRadical("idempotent refinement failed to converge")
    diff = C.sub(e, ebar)
    if any(diff) and (rad_solver is None or rad_solver.solve(diff) is None):
        raise VerificationFailure("lifted idempotent drifted outside ebar + Rad")
    return e
