"""Orders in a structure-constant algebra over F_q(x).

An order is carried as

* its coordinate matrix in the working ambient basis (columns of
  polynomials over a common denominator, never canonicalized until the
  end), and
* its own multiplication table c_ijk in F_q[x], recomputed after every
  enlargement by coordinate extraction against the freshly reduced basis.

Enlargement at a prime g works entirely inside the current basis frame:
the quotient by g is a finite algebra over the residue field, its radical
(or a minimal two-sided ideal over the radical) pulls back to an ideal I
with g*Lambda <= I <= Lambda, and the left order O_l(I) lives in
(1/g)*Lambda, so the kernel computation happens in F_q-spaces of dimension
m*deg(g) rather than m*deg(D0).  Discriminants follow the chain
d(new) = d(old) * det(T)^2 and strictly drop in degree at every step.

The ring at infinity is handled by rewriting the structure constants in
y = 1/x and running the same loop for the single prime y.
"""

from __future__ import annotations

import numpy as np

from . import finalg, lattice, linalg, polyrat
from .algebra import AlgElem, StructureAlgebra
from .errors import (
    NotFullRank,
    ValidationError,
    VerificationFailure,
)
from .polyrat import Poly, RatFunc

RING_FQX = "fx"
RING_INF = "infty"


class OrderRep:
    """An F_q[x]- or F_q[1/x]-order given by a basis plus cached data."""

    def __init__(self, ring, A, work, num_mat, den, table, disc, d0, stats=None):
        self.ring = ring
        self.A = A
        self.work = work  # StructureAlgebra in the working variable
        self.num_mat = num_mat  # m x m Poly: column j / den = coords of b_j
        self.den = den  # common denominator (Poly over the working variable)
        self.table = table  # table[i][j][k]: Poly structure constants of the basis
        self.disc = disc  # monic Poly
        self.d0 = d0  # monic Poly, discriminant of the initial almost order
        self.stats = stats if stats is not None else {}
        self._reduced_cols = None

    @property
    def m(self):
        return self.A.m

    def coord_columns(self):
        """Basis coordinates in the working ambient basis, canonical RatFunc."""
        m = self.m
        return [
            [RatFunc(self.num_mat[i][j], self.den) for i in range(m)] for j in range(m)
        ]

    @property
    def basis(self):
        """Basis elements as AlgElems of the original algebra (x-world)."""
        cols = self.coord_columns()
        if self.ring == RING_FQX:
            return [AlgElem(self.A, col) for col in cols]
        return [
            AlgElem(self.A, [polyrat.flip_variable(c) for c in col]) for col in cols
        ]

    def work_columns_reduced(self):
        """Basis columns reduced as a lattice in the working ambient frame."""
        if self._reduced_cols is None:
            red = lattice.reduce_generators(self.coord_columns())
            self._reduced_cols = red.vectors
        return self._reduced_cols

    def contains(self, col) -> bool:
        """Membership of a working-frame coordinate vector in the order."""
        return lattice.coordinates(self.work_columns_reduced(), col) is not None

    def same_module(self, other: "OrderRep") -> bool:
        return all(other.contains(c) for c in self.coord_columns()) and all(
            self.contains(c) for c in other.coord_columns()
        )

    def basis_coeff_degree(self) -> int:
        """max over basis coordinates of max(deg num, deg den), canonical."""
        best = 0
        for col in self.coord_columns():
            for c in col:
                if c.num:
                    best = max(best, int(c.num.deg), int(c.den.deg))
        return best

    def __repr__(self):
        return f"OrderRep({self.ring}, m={self.m}, disc deg {self.disc.deg})"


class IdealRep:
    """A left/two-sided module D0*L0 <= I <= (1/D0)*L0 given by generators."""

    def __init__(self, generators):
        self.generators = list(generators)


# -- working algebra for the infinity side -------------------------------------


def flipped_algebra(A: StructureAlgebra) -> StructureAlgebra:
    """The same abstract algebra with structure constants rewritten in y = 1/x."""
    cached = getattr(A, "_flipped", None)
    if cached is not None:
        return cached
    gamma = [
        [[polyrat.flip_variable(c) for c in row] for row in block]
        for block in A.gamma
    ]
    W = StructureAlgebra(A.field, gamma)
    if A._identity is not None:
        W._identity = AlgElem(
            W, [polyrat.flip_variable(c) for c in A._identity.coords]
        )
    A._flipped = W
    return W


def _working(A: StructureAlgebra, ring):
    if ring == RING_FQX:
        return A
    if ring == RING_INF:
        return flipped_algebra(A)
    raise ValidationError(f"unknown ring tag {ring!r}")


# -- bilinear product helper ------------------------------------------------------


def _bilinear_products(ncols, table):
    """All pairwise products of columns through a structure-constant table.

    ncols: list of coordinate vectors (list of Poly); table[i][j] a list of
    Poly.  Returns P[u][v] = coordinate vector (Poly) of col_u * col_v.
    """
    k = len(ncols)
    m = len(table)
    # T1[u][j] = sum_i ncols[u][i] * table_vec(i, j), a vector of m polys
    out = [[None] * k for _ in range(k)]
    t1 = [[None] * m for _ in range(k)]
    for u in range(k):
        for j in range(m):
            acc = None
            for i in range(m):
                cu = ncols[u][i]
                if not cu:
                    continue
                row = table[i][j]
                for t in range(m):
                    if row[t]:
                        term = cu * row[t]
                        if acc is None:
                            acc = [polyrat.zero(term.field) for _ in range(m)]
                        acc[t] = acc[t] + term
            t1[u][j] = acc
    for u in range(k):
        for v in range(k):
            acc = None
            for j in range(m):
                cv = ncols[v][j]
                if not cv:
                    continue
                tv = t1[u][j]
                if tv is None:
                    continue
                for t in range(m):
                    if tv[t]:
                        term = cv * tv[t]
                        if acc is None:
                            acc = [polyrat.zero(term.field) for _ in range(m)]
                        acc[t] = acc[t] + term
            if acc is None:
                fld = table[0][0][0].field
                acc = [polyrat.zero(fld) for _ in range(m)]
            out[u][v] = acc
    return out


def _table_from_reduced(field, ncols, products):
    """Structure constants by coordinate extraction against a reduced basis."""
    m = len(ncols)
    cols = []
    degs = []
    for j in range(m):
        arr_len = max((len(p.coeffs) for p in ncols[j]), default=0)
        arr = np.zeros((m, max(arr_len, 1), field.e), dtype=np.int64)
        for i, p in enumerate(ncols[j]):
            if p.coeffs:
                arr[i, : len(p.coeffs), :] = polyrat.poly_to_planes(p)
        arr, d = lattice._trim(arr)
        cols.append(arr)
        degs.append(d)
    lc_inv = lattice.plane_lc_inverse(field, cols, degs)
    table = [[None] * m for _ in range(m)]
    for u in range(m):
        for v in range(m):
            vec = products[u][v]
            arr_len = max((len(p.coeffs) for p in vec), default=0)
            arr = np.zeros((m, max(arr_len, 1), field.e), dtype=np.int64)
            for i, p in enumerate(vec):
                if p.coeffs:
                    arr[i, : len(p.coeffs), :] = polyrat.poly_to_planes(p)
            co = lattice.plane_coordinates(field, cols, degs, lc_inv, arr)
            if co is None:
                raise ValidationError("generators do not span a multiplicatively closed lattice")
            table[u][v] = co
    return table


# -- constructors -----------------------------------------------------------------


def order_from_generators(
    A: StructureAlgebra, ring, gens, d0: Poly = None, stats=None
) -> OrderRep:
    """Order (or almost order) spanned by generating elements of A.

    Generators are AlgElems of A; for the infinity ring their coordinates
    are rewritten in y = 1/x first.  Raises if the span is not closed under
    multiplication or not full rank.
    """
    work = _working(A, ring)
    fld = A.field
    cols = []
    for g in gens:
        coords = g.coords
        if ring == RING_INF:
            coords = [polyrat.flip_variable(c) for c in coords]
        cols.append(list(coords))
    red = lattice.reduce_generators(cols)
    m = A.m
    # scale the reduced columns to polynomial form over a common denominator
    den = polyrat.one(fld)
    for col in red.vectors:
        for c in col:
            if c.num:
                den = polyrat.lcm(den, c.den)
    num_mat = [[None] * m for _ in range(m)]
    ncols = []
    for j, col in enumerate(red.vectors):
        vec = []
        for i, c in enumerate(col):
            p = c.num * polyrat.divexact(den, c.den) if c.num else polyrat.zero(fld)
            num_mat[i][j] = p
            vec.append(p)
        ncols.append(vec)
    # col_u col_v = sum_t P[t]/(den^2 * delta) a_t with P through gamma_scaled,
    # so the extraction target against the columns N/den is P/(den*delta)
    prods = _bilinear_products(ncols, work.gamma_scaled)
    dend = den * work.delta
    scaled = [
        [[_divexact_checked(p, dend) for p in prods[u][v]] for v in range(m)]
        for u in range(m)
    ]
    table = _table_from_reduced(fld, ncols, scaled)
    disc = work.discriminant([AlgElem(work, col) for col in red.vectors])
    return OrderRep(
        ring, A, work, num_mat, den, table, disc, d0 if d0 is not None else disc, stats
    )


def _divexact_checked(p: Poly, d: Poly) -> Poly:
    if not p:
        return p
    q, r = divmod(p, d)
    if r:
        raise ValidationError("generators do not span a multiplicatively closed lattice")
    return q


def almost_order(A: StructureAlgebra, ring=RING_FQX) -> OrderRep:
    """The initial almost order spanned by delta * a_i."""
    work = _working(A, ring)
    fld = A.field
    m = A.m
    delta = work.delta
    num_mat = [
        [delta if i == j else polyrat.zero(fld) for j in range(m)] for i in range(m)
    ]
    # structure constants of delta*a_i are exactly gamma_scaled
    table = [
        [list(work.gamma_scaled[i][j]) for j in range(m)] for i in range(m)
    ]
    basis = [
        AlgElem(work, [RatFunc(num_mat[i][j]) for i in range(m)]) for j in range(m)
    ]
    disc = work.discriminant(basis)
    # degree bound on d(Lambda_0)
    bound = 2 * A.n**8 * work.d_den + 2 * A.n**2 * work.d_num
    if disc.deg > max(bound, 0):
        raise VerificationFailure(
            f"deg d0 = {disc.deg} exceeds the bound {bound}"
        )
    return OrderRep(ring, A, work, num_mat, polyrat.one(fld), table, disc, disc)


def unital_closure(lam0: OrderRep) -> OrderRep:
    """The order generated by an almost order and the identity element."""
    work = lam0.work
    e = work.find_identity()  # raises NotUnital
    # identity coordinates in the current basis frame
    if lam0.den.is_one() and _is_scaled_identity(lam0.num_mat, work.delta):
        sol = [c / RatFunc(work.delta) for c in e.coords]
    else:
        cols = lam0.coord_columns()
        mat = [[cols[j][i] for j in range(lam0.m)] for i in range(lam0.m)]
        sol = linalg.solve(mat, e.coords)
        if sol is None:
            raise VerificationFailure("identity is outside the ambient span")
    if all(c.is_polynomial() for c in sol):
        return lam0  # identity already inside; module unchanged
    return _extend(lam0, [sol])


def _is_scaled_identity(num_mat, delta: Poly) -> bool:
    m = len(num_mat)
    for i in range(m):
        for j in range(m):
            expect = delta if i == j else None
            entry = num_mat[i][j]
            if expect is None:
                if entry:
                    return False
            elif entry != expect:
                return False
    return True


# -- the incremental extension -----------------------------------------------------


def _extend(order: OrderRep, new_vecs) -> OrderRep:
    """Order generated by the current basis and new current-frame vectors."""
    m = order.m
    fld = order.A.field
    zero = polyrat.rat_zero(fld)
    one = polyrat.rat_one(fld)
    gens = [
        [one if i == j else zero for i in range(m)] for j in range(m)
    ] + [list(v) for v in new_vecs]
    red = lattice.reduce_generators(gens)
    if len(red.vectors) != m:
        raise NotFullRank("extension lost rank")
    # common denominator of the transform (divides the product of new denominators)
    tden = polyrat.one(fld)
    for col in red.vectors:
        for c in col:
            if c.num:
                tden = polyrat.lcm(tden, c.den)
    tnum = []
    for col in red.vectors:
        tnum.append(
            [
                c.num * polyrat.divexact(tden, c.den) if c.num else polyrat.zero(fld)
                for c in col
            ]
        )
    # new multiplication table: products through the old table, then extraction
    prods = _bilinear_products(tnum, order.table)
    scaled = [
        [[_divexact_checked(p, tden) for p in prods[u][v]] for v in range(m)]
        for u in range(m)
    ]
    table = _table_from_reduced(fld, tnum, scaled)
    # discriminant chain: d(new) = d(old) * det(T)^2, monic
    dett = linalg.determinant(
        [[RatFunc(tnum[j][i], tden) for i in range(m)] for j in range(m)]
    )
    dnum = order.disc * dett.num * dett.num
    dden = dett.den * dett.den
    q, r = divmod(dnum, dden)
    if r:
        raise VerificationFailure("discriminant chain division is inexact")
    disc = q.monic()
    if disc.deg >= order.disc.deg:
        raise VerificationFailure("enlargement did not decrease the discriminant")
    if divmod(order.disc, disc)[1]:
        raise VerificationFailure("new discriminant does not divide the old one")
    # ambient coordinates: N_new = N_old * T, den_new = den_old * tden
    # (tnum is indexed [vector][component] = T transposed)
    num_mat = [[None] * m for _ in range(m)]
    for i in range(m):
        for u in range(m):
            acc = polyrat.zero(fld)
            for t in range(m):
                a = order.num_mat[i][t]
                b = tnum[u][t]
                if a and b:
                    acc = acc + a * b
            num_mat[i][u] = acc
    den = order.den * tden
    return OrderRep(
        order.ring, order.A, order.work, num_mat, den, table, disc, order.d0, order.stats
    )


# -- residues ---------------------------------------------------------------------


class _Residue:
    """F_q[x]/(g) with fast evaluation when g is linear."""

    def __init__(self, base, g: Poly):
        self.g = g
        self.dg = int(g.deg)
        self.base = base
        if self.dg == 1:
            self.field = base
            self.lam = base.neg(g.coeffs[0])
        else:
            self.field = finalg.ResidueField(base, g)

    def reduce(self, p: Poly) -> int:
        if self.dg == 1:
            return p.evaluate(self.lam)
        return self.field.from_poly(p)

    def lift(self, a: int) -> Poly:
        if self.dg == 1:
            return polyrat.constant(self.base, a)
        return Poly(self.base, self.field.decode(a))


def quotient_by_prime(order: OrderRep, g: Poly):
    """(FiniteAlgebra Lambda/g*Lambda over the residue field, residue helper)."""
    res = _Residue(order.A.field, g.monic())
    m = order.m
    gamma = [
        [[res.reduce(order.table[i][j][k]) for k in range(m)] for j in range(m)]
        for i in range(m)
    ]
    B = finalg.FiniteAlgebra(res.field, gamma)
    return B, res


# -- the local left order ------------------------------------------------------------


def _left_order_new_vectors(order: OrderRep, ideal_cols, g: Poly):
    """Current-frame vectors spanning O_l(I)/Lambda inside (1/g)Lambda/Lambda.

    ideal_cols: m reduced polynomial coordinate vectors (in the current
    basis frame) of an ideal I with g*Lambda <= I <= Lambda.
    """
    fld = order.A.field
    m = order.m
    dg = int(g.deg)
    g2 = g * g
    # table and ideal columns reduced mod g^2
    tmod = [
        [[order.table[i][j][k] % g2 for k in range(m)] for j in range(m)]
        for i in range(m)
    ]
    cmod = [[c % g2 for c in col] for col in ideal_cols]

    def w_encode(polys):
        """(1/g)Lambda/g*Lambda coordinates of sum (f_t/g) b_t.

        polys holds f_t mod g^2; each f_t = f0 + g*f1 contributes the
        coefficient vectors of f0 and f1 (length dg each).
        """
        vec = np.zeros((2 * m * dg, fld.e), dtype=np.int64)
        for t, f in enumerate(polys):
            if not f:
                continue
            f1, f0 = divmod(f, g)
            if f0.coeffs:
                pl = polyrat.poly_to_planes(f0)
                vec[t * dg : t * dg + len(f0.coeffs)] = pl
            if f1.coeffs:
                pl = polyrat.poly_to_planes(f1)
                base = m * dg + t * dg
                vec[base : base + len(f1.coeffs)] = pl
        return vec

    # subspace of W spanned by I: x^a * c_j, entering through the g*f1 part
    sub_rows = []
    for j in range(m):
        cur = [g * (c % g) for c in cmod[j]]
        for _a in range(dg):
            sub_rows.append(w_encode(cur))
            cur = [(p.shift(1)) % g2 for p in cur]
    sub = np.stack(sub_rows) if sub_rows else np.zeros((0, 2 * m * dg, fld.e), dtype=np.int64)
    sub_rref, sub_pivots = linalg.planes_rref(fld, sub)
    pivset = sub_pivots

    def project(vec):
        # eliminate against the rref rows of the ideal subspace
        v = vec.copy()
        for r, pc in enumerate(pivset):
            c = int(fld.from_planes(v[pc]))
            if c:
                v = (v - linalg.planes_scale(fld, sub_rref[r], c)) % fld.p
        return v

    # condition matrix over the V-basis (x^k/g) b_i
    nv = m * dg
    rows_per_j = 2 * m * dg
    cond = np.zeros((m * rows_per_j, nv, fld.e), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            # u = b_i * c_j in current coordinates, mod g^2
            u = [polyrat.zero(fld) for _ in range(m)]
            for l in range(m):
                cl = cmod[j][l]
                if not cl:
                    continue
                row = tmod[i][l]
                for t in range(m):
                    if row[t]:
                        u[t] = u[t] + cl * row[t]
            u = [p % g2 for p in u]
            cur = u
            for k in range(dg):
                w = project(w_encode(cur))
                cond[j * rows_per_j : (j + 1) * rows_per_j, i * dg + k, :] = w
                if k < dg - 1:
                    cur = [(p.shift(1)) % g2 for p in cur]
    kern = linalg.planes_kernel(fld, cond)
    new_vecs = []
    for z in range(kern.shape[0]):
        coeffs = fld.from_planes(kern[z])  # length m*dg ints
        vec = []
        nonzero = False
        for i in range(m):
            poly = Poly(fld, [int(c) for c in coeffs[i * dg : (i + 1) * dg]])
            if poly:
                nonzero = True
            vec.append(RatFunc(poly, g))
        if nonzero:
            new_vecs.append(vec)
    return new_vecs


def _pullback_ideal(order: OrderRep, res: _Residue, g: Poly, residue_vectors):
    """Reduced current-frame basis of the ideal spanned by lifts and g*Lambda."""
    fld = order.A.field
    m = order.m
    zero = polyrat.rat_zero(fld)
    gens = []
    grat = RatFunc(g)
    for j in range(m):
        col = [zero] * m
        col[j] = grat
        gens.append(col)
    for v in residue_vectors:
        gens.append([RatFunc(res.lift(a)) for a in v])
    red = lattice.reduce_generators(gens)
    cols = []
    for col in red.vectors:
        vec = []
        for c in col:
            if c.num and c.den.deg != 0:
                raise VerificationFailure("ideal pullback has non-integral coordinates")
            vec.append(c.num)
        cols.append(vec)
    return cols


def enlarge_at_prime(order: OrderRep, g: Poly, seed: int = 0):
    """One enlargement test at a prime; None means locally maximal at g.

    Test 1 pulls back the radical of Lambda/g*Lambda and compares the left
    order; test 2 does the same for every minimal two-sided ideal over the
    radical.  Any strict growth is returned immediately.
    """
    g = g.monic()
    B, res = quotient_by_prime(order, g)
    rad = finalg.radical(B)
    if rad:
        ideal_cols = _pullback_ideal(order, res, g, rad)
        new_vecs = _left_order_new_vectors(order, ideal_cols, g)
        if new_vecs:
            _check_left_order(order, new_vecs, ideal_cols, g)
            return _extend(order, new_vecs)
    # test 2: minimal two-sided ideals containing the radical
    Q, _proj, lift = finalg.quotient_algebra(B, rad)
    centrals = finalg.central_primitive_idempotents(Q, seed=seed)
    if len(centrals) <= 1:
        return None  # the only candidate ideal pulls back to Lambda itself
    for eps in centrals:
        comp = finalg.span_basis(
            Q.base, [Q.mul(Q.unit_vec(i), eps) for i in range(Q.dim)]
        )
        vecs = list(rad) + [lift(v) for v in comp]
        ideal_cols = _pullback_ideal(order, res, g, vecs)
        new_vecs = _left_order_new_vectors(order, ideal_cols, g)
        if new_vecs:
            _check_left_order(order, new_vecs, ideal_cols, g)
            return _extend(order, new_vecs)
    return None


def _check_left_order(order: OrderRep, new_vecs, ideal_cols, g: Poly):
    """Each new element a of O_l(I) must satisfy a*I <= I (Lambda*I <= I holds
    by construction, so only the strictly new vectors need checking).

    All arithmetic is polynomial: with a = vnum/g, the coordinates of
    g*(a*c) are extracted against the lattice spanned by g*I.
    """
    fld = order.A.field
    m = order.m
    scaled_cols = []
    degs = []
    for col in ideal_cols:
        polys = [g * p for p in col]
        length = max((len(p.coeffs) for p in polys), default=0)
        arr = np.zeros((m, max(length, 1), fld.e), dtype=np.int64)
        for i, p in enumerate(polys):
            if p.coeffs:
                arr[i, : len(p.coeffs), :] = polyrat.poly_to_planes(p)
        arr, d = lattice._trim(arr)
        scaled_cols.append(arr)
        degs.append(d)
    lc_inv = lattice.plane_lc_inverse(fld, scaled_cols, degs)
    for vec in new_vecs:
        vnum = [c.num * polyrat.divexact(g, c.den) if c.num else polyrat.zero(fld) for c in vec]
        for icol in ideal_cols:
            prod = [polyrat.zero(fld) for _ in range(m)]
            for i in range(m):
                if not vnum[i]:
                    continue
                for j in range(m):
                    if not icol[j]:
                        continue
                    c = vnum[i] * icol[j]
                    row = order.table[i][j]
                    for t in range(m):
                        if row[t]:
                            prod[t] = prod[t] + c * row[t]
            length = max((len(p.coeffs) for p in prod), default=0)
            arr = np.zeros((m, max(length, 1), fld.e), dtype=np.int64)
            for i, p in enumerate(prod):
                if p.coeffs:
                    arr[i, : len(p.coeffs), :] = polyrat.poly_to_planes(p)
            if lattice.plane_coordinates(fld, scaled_cols, degs, lc_inv, arr) is None:
                raise VerificationFailure("left order does not stabilize its ideal")


# -- maximal order loops ----------------------------------------------------------


def _v_g(f: Poly, g: Poly) -> int:
    v = 0
    while f.deg >= g.deg:
        q, r = divmod(f, g)
        if r:
            break
        f = q
        v += 1
    return v


def maximal_order_fqx(A: StructureAlgebra, seed: int = 0) -> OrderRep:
    """A maximal F_q[x]-order containing the scaled input basis."""
    lam0 = almost_order(A, RING_FQX)
    lam = unital_closure(lam0)
    d0 = lam0.disc
    fac = polyrat.factor_poly(d0, seed=seed)
    steps = 0
    chain = [int(lam.disc.deg)]
    for g, _mult in fac.factors:
        while _v_g(lam.disc, g) > 0:
            bigger = enlarge_at_prime(lam, g, seed=seed)
            if bigger is None:
                break
            lam = bigger
            steps += 1
            chain.append(int(lam.disc.deg))
            if steps > d0.deg:
                raise VerificationFailure("enlargement count exceeded deg d0")
    final = order_from_generators(A, RING_FQX, lam.basis, d0=d0)
    bound = (2 * A.n**8 + A.n**6 + 2 * A.n**2) * A.d_c
    if final.basis_coeff_degree() > bound:
        raise VerificationFailure("maximal order coefficients exceed the degree bound")
    _assert_containment(final, lam0)
    final.stats = {"steps": steps, "disc_chain": chain, "d0_deg": int(d0.deg)}
    return final


def maximal_order_infinity(A: StructureAlgebra, seed: int = 0) -> OrderRep:
    """An F_q[1/x]-order whose localization at the prime 1/x is maximal."""
    lam0 = almost_order(A, RING_INF)
    lam = unital_closure(lam0)
    d0 = lam0.disc
    y = polyrat.x_poly(A.field)  # the prime 1/x in the working variable
    steps = 0
    chain = [int(lam.disc.deg)]
    while _v_g(lam.disc, y) > 0:
        bigger = enlarge_at_prime(lam, y, seed=seed)
        if bigger is None:
            break
        lam = bigger
        steps += 1
        chain.append(int(lam.disc.deg))
        if steps > d0.deg:
            raise VerificationFailure("enlargement count exceeded deg d0")
    final = order_from_generators(A, RING_INF, lam.basis, d0=d0)
    bound = (2 * A.n**8 + A.n**6 + 2 * A.n**2) * A.d_c
    if final.basis_coeff_degree() > bound:
        raise VerificationFailure("maximal order coefficients exceed the degree bound")
    final.stats = {
        "steps": steps,
        "disc_chain": chain,
        "d0_deg": int(d0.deg),
        "y_exponent": _v_g(final.disc, y),
    }
    return final


def _assert_containment(order: OrderRep, lam0: OrderRep):
    """Every basis element must lie in (1/d0) * Lambda_0."""
    delta = order.work.delta
    d0 = order.d0
    for col in order.coord_columns():
        for c in col:
            if not c.num:
                continue
            scaled = c / RatFunc(delta)  # coordinate w.r.t. delta * a_i
            if divmod(d0, scaled.den)[1]:
                raise VerificationFailure("order escaped (1/d0) * Lambda_0")


# -- the public left order --------------------------------------------------------


def left_order(order: OrderRep, ideal: IdealRep) -> OrderRep:
    """O_l(I) = {a : aI <= I}, via kernels over an F_q-basis of I/d0*I.

    Candidates live in (1/d0)*Lambda_0 / Lambda_0 with F_q-basis
    (x^k/d0) * delta*a_i; the result is the order generated by the current
    basis and the kernel lifts.
    """
    A = order.A
    work = order.work
    fld = A.field
    m = A.m
    d0 = order.d0
    dd = int(d0.deg)
    if dd == 0:
        return order_from_generators(A, order.ring, order.basis, d0=d0)
    delta = work.delta
    # ideal columns in the working ambient frame
    icols = []
    for gen in ideal.generators:
        coords = gen.coords
        if order.ring == RING_INF:
            coords = [polyrat.flip_variable(c) for c in coords]
        icols.append(coords)
    ired = lattice.reduce_generators(icols)
    ivecs = ired.vectors
    # V-basis elements (x^k/d0) * delta*a_i as ambient coordinate vectors
    vbasis = []
    for i in range(m):
        for k in range(dd):
            col = [polyrat.rat_zero(fld)] * m
            col[i] = RatFunc(polyrat.monomial(fld, k) * delta, d0)
            vbasis.append(col)
    # F_q-basis of I/d0I: x^k * c_j; conditions: v * b in I
    rows = []
    for j, cj in enumerate(ivecs):
        for k in range(dd):
            b = [RatFunc(polyrat.monomial(fld, k)) * c for c in cj]
            for v in vbasis:
                prod = _ambient_product(work, v, b)
                co = lattice.coordinates(ivecs, [c * RatFunc(d0) for c in prod])
                if co is None:
                    raise ValidationError("ideal is not a left module over the order")
                rows.append([_poly_mod_coeffs(c % d0, dd, fld) for c in co])
    # rows currently hold, for each (j,k,v): the residues mod d0 - rearrange:
    nv = len(vbasis)
    ncond = len(rows) // nv
    cond_rows = []
    for c_idx in range(ncond):
        block = rows[c_idx * nv : (c_idx + 1) * nv]
        for t in range(m):
            for pos in range(dd):
                cond_rows.append([block[v_idx][t][pos] for v_idx in range(nv)])
    kern = linalg.ff_kernel(fld, cond_rows) if cond_rows else []
    new_elems = list(order.basis)
    for z in kern:
        col = [polyrat.rat_zero(fld)] * m
        any_nz = False
        for v_idx, c in enumerate(z):
            if c:
                any_nz = True
                cr = RatFunc(polyrat.constant(fld, c))
                col = [a + cr * b for a, b in zip(col, vbasis[v_idx])]
        if any_nz:
            coords = col
            if order.ring == RING_INF:
                coords = [polyrat.flip_variable(c) for c in coords]
            new_elems.append(AlgElem(A, coords))
    return order_from_generators(A, order.ring, new_elems, d0=d0)


def _ambient_product(work: StructureAlgebra, u, v):
    return work.mul_coords(u, v)


def _poly_mod_coeffs(p: Poly, length: int, fld):
    out = p.coeffs + [0] * (length - len(p.coeffs))
    return out[:length]


# -- serialization ------------------------------------------------------------------


def order_to_json(order: OrderRep):
    cols = [[polyrat.ratfunc_to_json(c) for c in b.coords] for b in order.basis]
    return {
        "m": order.m,
        "ring": order.ring,
        "vectors": cols,
        "disc": polyrat.poly_to_json(order.disc),
    }
