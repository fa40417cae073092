"""From a pair of maximal orders to a verified explicit isomorphism.

The x-side order and the order at infinity intersect in a finite
F_q-algebra C (the basis elements x^j c_i with j + |c_i| <= 0, where the
c_i reduce the x-side basis written in coordinates over the infinity-side
basis).  A Wedderburn-Malcev complement of C carries a complete system of
orthogonal primitive idempotents; one of them has rank 1 in the ambient
algebra, its left ideal is an irreducible module, and the action of the
ambient basis on that module is the isomorphism, verified entry by entry
on all m^2 basis products.
"""

from __future__ import annotations

from . import finalg, lattice, linalg, order as ordermod, polyrat
from .algebra import AlgElem, StructureAlgebra
from .errors import (
    BadIdempotent,
    NotSplit,
    ValidationError,
    VerificationFailure,
)
from .polyrat import Poly, RatFunc


class IntersectionReport:
    """The finite algebra C = Lambda and Delta intersected, plus size data."""

    def __init__(self, finite, c_basis, d_values, reduced_c):
        self.finite = finite  # FiniteAlgebra over F_q with ambient embedding
        self.c_basis = c_basis  # AlgElems of the ambient algebra
        self.d_values = d_values
        self.d_min = min(d_values)
        self.d_max = max(d_values)
        self.reduced_c = reduced_c  # reduced Lambda-basis in Delta-coordinates

    @property
    def dim(self):
        return self.finite.dim


class Isomorphism:
    """Images of the ambient basis in M_n(F_q(x)) plus the minimal left ideal."""

    def __init__(self, n, images, left_ideal_basis):
        self.n = n
        self.images = images  # list of m matrices (n x n nested RatFunc)
        self.left_ideal_basis = left_ideal_basis  # n AlgElems spanning Ae


class PipelineResult:
    def __init__(self, idempotent, isomorphism, report, lam, delta):
        self.idempotent = idempotent
        self.isomorphism = isomorphism
        self.report = report
        self.lam = lam
        self.delta = delta
        self.verified = True


def intersect_orders(lam: ordermod.OrderRep, delta: ordermod.OrderRep) -> IntersectionReport:
    """F_q-basis of C = Lambda meet Delta, via reduction in Delta-coordinates.

    A coordinate vector over the infinity-side basis represents an element
    of Delta exactly when all coordinate valuations are <= 0, so after
    reducing Lambda's basis the members of C are the x^j c_i with
    j + |c_i| <= 0.
    """
    A = lam.A
    m = A.m
    fld = A.field
    bvecs = [b.coords for b in lam.basis]
    uvecs = [u.coords for u in delta.basis]
    umat = [[uvecs[j][i] for j in range(m)] for i in range(m)]
    uinv = linalg.inverse(umat)
    if uinv is None:
        raise ValidationError("infinity-side basis is singular")
    beta = [linalg.mat_vec(uinv, b) for b in bvecs]  # b_j in u-coordinates
    d_values = [int(lattice.vector_valuation(b)) for b in beta]
    n = A.n
    dc = A.d_c
    if max(d_values) > (2 * n**8 + 2 * n**6 + 2 * n**2) * dc:
        raise VerificationFailure("d_max exceeds its bound")
    if min(d_values) < -2 * (2 * n**8 + n**6 + 2 * n**2) * dc:
        raise VerificationFailure("d_min exceeds its bound")
    basis = lattice.LatticeBasis(m, beta)
    reduced, cert = lattice.reduce_basis(basis)
    cvecs = reduced.vectors
    cvals = [lattice.vector_valuation(c) for c in cvecs]
    # coefficient-degree bound for C elements over the Lambda-basis:
    # c_i = sum_t transform[t][i] b_t with polynomial entries
    coeff_bound = n**2 * max(d_values) - min(d_values)
    for row in cert.transform:
        for p in row:
            if p and p.deg > coeff_bound:
                raise VerificationFailure("C-element coefficients exceed their bound")
    # enumerate x^j c_i with j + |c_i| <= 0; bcoords through the transform
    members = []  # (i, j, u-coords vector, b-coords polynomial vector)
    j = 0
    while True:
        layer = []
        xj = RatFunc(polyrat.monomial(fld, j))
        for i, (cv, val) in enumerate(zip(cvecs, cvals)):
            if val == polyrat.NEG_INF or j + val > 0:
                continue
            ucoords = [xj * c for c in cv]
            bcoords = [cert.transform[t][i] * polyrat.monomial(fld, j) for t in range(m)]
            layer.append((i, j, ucoords, bcoords))
        if not layer:
            break
        members.extend(layer)
        j += 1
    if not members:
        raise VerificationFailure("C is empty; orders do not intersect")
    dimc = len(members)
    # embeddings into the ambient algebra
    c_basis = []
    for _i, _j, ucoords, _b in members:
        amb = linalg.mat_vec(umat, ucoords)
        c_basis.append(AlgElem(A, amb))
    # multiplication table over F_q: products through Lambda's table in
    # b-coordinates, re-expressed in u-coordinates, extracted against the
    # reduced c-basis; the polynomial coefficients are the C-coordinates
    bden = polyrat.one(fld)
    for col in beta:
        for c in col:
            if c.num:
                bden = polyrat.lcm(bden, c.den)
    bnum = [
        [
            (beta[t][r].num * polyrat.divexact(bden, beta[t][r].den))
            if beta[t][r].num
            else polyrat.zero(fld)
            for r in range(m)
        ]
        for t in range(m)
    ]  # bnum[t][r]: numerator of coordinate r of b_t in u-coords
    # scale the reduced basis and all products into one polynomial frame
    gamma_c = polyrat.one(fld)
    for col in cvecs:
        for c in col:
            if c.num:
                gamma_c = polyrat.lcm(gamma_c, c.den)
    scale = polyrat.lcm(gamma_c, bden)
    extra = polyrat.divexact(scale, bden)
    import numpy as _np

    ccols = []
    cdegs = []
    for col in cvecs:
        polys = [
            c.num * polyrat.divexact(scale, c.den) if c.num else polyrat.zero(fld)
            for c in col
        ]
        length = max((len(p.coeffs) for p in polys), default=0)
        arr = _np.zeros((m, max(length, 1), fld.e), dtype=_np.int64)
        for i, p in enumerate(polys):
            if p.coeffs:
                arr[i, : len(p.coeffs), :] = polyrat.poly_to_planes(p)
        arr, d = lattice._trim(arr)
        ccols.append(arr)
        cdegs.append(d)
    lc_inv = lattice.plane_lc_inverse(fld, ccols, cdegs)
    table = [[None] * dimc for _ in range(dimc)]
    for a_idx, (_ia, _ja, _ua, ba) in enumerate(members):
        for b_idx, (_ib, _jb, _ub, bb) in enumerate(members):
            # product in b-coordinates via the order's table
            prod_b = [polyrat.zero(fld) for _ in range(m)]
            for i in range(m):
                if not ba[i]:
                    continue
                for jj in range(m):
                    if not bb[jj]:
                        continue
                    c = ba[i] * bb[jj]
                    row = lam.table[i][jj]
                    for t in range(m):
                        if row[t]:
                            prod_b[t] = prod_b[t] + c * row[t]
            # to scaled u-coordinates: extra * sum_t prod_b[t] * bnum[t]
            prod_u = []
            for r in range(m):
                acc = polyrat.zero(fld)
                for t in range(m):
                    if prod_b[t] and bnum[t][r]:
                        acc = acc + prod_b[t] * bnum[t][r]
                prod_u.append(acc * extra if acc else acc)
            length = max((len(p.coeffs) for p in prod_u), default=0)
            arr = _np.zeros((m, max(length, 1), fld.e), dtype=_np.int64)
            for i, p in enumerate(prod_u):
                if p.coeffs:
                    arr[i, : len(p.coeffs), :] = polyrat.poly_to_planes(p)
            co = lattice.plane_coordinates(fld, ccols, cdegs, lc_inv, arr)
            if co is None:
                raise VerificationFailure("C is not multiplicatively closed")
            # C-coordinates: coefficient of x^j_k in co[i_k] for member (i_k, j_k);
            # anything outside the enumerated support means a closure failure
            vec = [co[i_k].coeff(j_k) for (i_k, j_k, _u, _b) in members]
            residue = [Poly(fld, list(p.coeffs)) for p in co]
            for i_k, j_k, _u, _b in members:
                if residue[i_k].coeff(j_k):
                    cs = list(residue[i_k].coeffs)
                    cs[j_k] = 0
                    residue[i_k] = Poly(fld, cs)
            if any(residue):
                raise VerificationFailure("product left the span of C")
            table[a_idx][b_idx] = vec
    finite = finalg.FiniteAlgebra(fld, table, embed=c_basis)
    finite.identity()  # C must contain 1; raises otherwise
    return IntersectionReport(finite, c_basis, d_values, cvecs)


def select_rank_one(C: finalg.FiniteAlgebra, A: StructureAlgebra, seed: int = 0) -> AlgElem:
    """A rank-1 idempotent of A found inside C's idempotent system."""
    comp = finalg.wm_complement(C)
    solver = finalg._Solver(C.base, [list(v) for v in comp])
    k = len(comp)
    gamma = [[None] * k for _ in range(k)]
    for a in range(k):
        for b in range(k):
            co = solver.solve(C.mul(comp[a], comp[b]))
            if co is None:
                raise VerificationFailure("complement is not closed")
            gamma[a][b] = co
    sub = finalg.FiniteAlgebra(C.base, gamma)
    system = finalg.primitive_idempotent_system(sub, seed=seed)
    for evec in system.elements:
        cvec = C.zero_vec()
        for c, base_vec in zip(evec, comp):
            if c:
                cvec = C.add(cvec, C.scale(c, base_vec))
        elem = C.embed_elem(cvec)
        prod = elem * elem
        if prod.coords != elem.coords:
            raise VerificationFailure("idempotent does not square to itself in A")
        if not elem.is_zero() and A.rank(elem) == 1:
            return elem
    raise NotSplit("no idempotent of rank 1: the algebra is not a full matrix algebra")


def explicit_isomorphism(A: StructureAlgebra, e: AlgElem) -> Isomorphism:
    """The action of A on its minimal left ideal Ae, verified exactly."""
    if (e * e).coords != e.coords:
        raise BadIdempotent("element is not idempotent")
    m, n = A.m, A.n
    fld = A.field
    candidates = [(A.basis_elem(i) * e) for i in range(m)]
    vbasis = []
    rows = []  # working rref rows over the candidate coordinates
    for cand in candidates:
        trial = rows + [list(cand.coords)]
        work = [list(r) for r in trial]
        if len(linalg._rref(work, m)) == len(trial):
            rows = trial
            vbasis.append(cand)
    if len(vbasis) != n:
        raise BadIdempotent(f"dim Ae = {len(vbasis)} differs from n = {n}")
    # align the basis so that Ae maps exactly onto the first-column matrices:
    # e*v_j = lam_j * e since eAe is one-dimensional, and after moving a
    # nonzero lam to the front and clearing the others, every phi(a) with
    # a in Ae is supported on the first column
    pivot_t = next(t for t in range(m) if e.coords[t])
    lams = []
    for v in vbasis:
        w = e * v
        lam = w.coords[pivot_t] / e.coords[pivot_t]
        if [c * lam for c in e.coords] != w.coords:
            raise VerificationFailure("eAe is not one-dimensional")
        lams.append(lam)
    first = next((j for j, lam in enumerate(lams) if lam), None)
    if first is None:
        raise BadIdempotent("identity coefficient vanished on the left ideal")
    vbasis.insert(0, vbasis.pop(first))
    lams.insert(0, lams.pop(first))
    for j in range(1, n):
        if lams[j]:
            factor = lams[j] / lams[0]
            vbasis[j] = vbasis[j] - vbasis[0] * factor
    # express every a_i * v_j in the v-basis with a single elimination pass;
    # products go through the scaled (polynomial) structure constants
    prods = []
    for j in range(n):
        vden = polyrat.one(fld)
        for c in vbasis[j].coords:
            if c.num:
                vden = polyrat.lcm(vden, c.den)
        vnum = [
            c.num * polyrat.divexact(vden, c.den) if c.num else polyrat.zero(fld)
            for c in vbasis[j].coords
        ]
        den = vden * A.delta
        for i in range(m):
            coords = []
            for k in range(m):
                acc = polyrat.zero(fld)
                for t in range(m):
                    g = A.gamma_scaled[i][t][k]
                    if g and vnum[t]:
                        acc = acc + g * vnum[t]
                coords.append(RatFunc(acc, den))
            prods.append((i, j, coords))
    prods.sort(key=lambda r: (r[0], r[1]))
    prods = [p for _i, _j, p in prods]
    aug = []
    for r in range(m):
        row = [vbasis[j].coords[r] for j in range(n)]
        row.extend(p[r] for p in prods)
        aug.append(row)
    pivots = linalg._rref(aug, n)
    if len(pivots) != n:
        raise VerificationFailure("left ideal basis lost rank")
    zero = polyrat.rat_zero(fld)
    for r in range(n, m):  # consistency: non-pivot rows must be fully zero
        if any(aug[r][n:]):
            raise VerificationFailure("left ideal is not invariant")
    images = []
    for i in range(m):
        img = [[zero] * n for _ in range(n)]
        for j in range(n):
            col = n + i * n + j
            for r, pc in enumerate(pivots):
                img[pc][j] = aug[r][col]
        images.append(img)
    _verify_homomorphism(A, images)
    return Isomorphism(n, images, vbasis)


def _verify_homomorphism(A: StructureAlgebra, images):
    """phi(a_i) phi(a_j) = phi(a_i a_j) on all pairs; phi(1) = I; bijective.

    With N_k = D * phi(a_k) over a common denominator D, every pair check
    becomes the polynomial identity delta * N_i N_j = D * sum_k g'_ijk N_k.
    """
    m, n = A.m, A.n
    fld = A.field
    dcom = polyrat.one(fld)
    for img in images:
        for row in img:
            for c in row:
                if c.num:
                    dcom = polyrat.lcm(dcom, c.den)
    nmats = []
    for img in images:
        nmats.append(
            [
                [
                    c.num * polyrat.divexact(dcom, c.den) if c.num else polyrat.zero(fld)
                    for c in row
                ]
                for row in img
            ]
        )
    zero_p = polyrat.zero(fld)
    delta = A.delta
    for i in range(m):
        for j in range(m):
            left = [
                [
                    _poly_dot(nmats[i][r], [nmats[j][t][c] for t in range(n)], zero_p)
                    for c in range(n)
                ]
                for r in range(n)
            ]
            expect = [[zero_p for _ in range(n)] for _ in range(n)]
            for k in range(m):
                g = A.gamma_scaled[i][j][k]
                if not g:
                    continue
                mk = nmats[k]
                for r in range(n):
                    for c in range(n):
                        if mk[r][c]:
                            expect[r][c] = expect[r][c] + g * mk[r][c]
            for r in range(n):
                for c in range(n):
                    if delta * left[r][c] != dcom * expect[r][c]:
                        raise VerificationFailure(
                            f"homomorphism check failed at pair ({i},{j})"
                        )
    one = A.find_identity()
    zero = polyrat.rat_zero(fld)
    ident = [[zero for _ in range(n)] for _ in range(n)]
    onef = polyrat.rat_one(fld)
    for r in range(n):
        ident[r][r] = onef
    img1 = [[zero for _ in range(n)] for _ in range(n)]
    for k in range(m):
        c = one.coords[k]
        if not c:
            continue
        for r in range(n):
            for cc in range(n):
                if images[k][r][cc]:
                    img1[r][cc] = img1[r][cc] + c * images[k][r][cc]
    if img1 != ident:
        raise VerificationFailure("phi(1) is not the identity matrix")
    flat = [[images[k][r][c] for r in range(n) for c in range(n)] for k in range(m)]
    if linalg.rank(flat) != m:
        raise VerificationFailure("images are linearly dependent")


def _poly_dot(row, col, zero):
    acc = zero
    for a, b in zip(row, col):
        if a and b:
            acc = acc + a * b
    return acc


def split_pipeline(A: StructureAlgebra, seed: int = 0) -> PipelineResult:
    """Maximal orders on both sides, C, a rank-1 idempotent, the isomorphism."""
    A.find_identity()  # NotUnital on bad input, before any heavy work
    lam = ordermod.maximal_order_fqx(A, seed=seed)
    delta = ordermod.maximal_order_infinity(A, seed=seed)
    report = intersect_orders(lam, delta)
    e = select_rank_one(report.finite, A, seed=seed)
    iso = explicit_isomorphism(A, e)
    return PipelineResult(e, iso, report, lam, delta)


# -- serialization -----------------------------------------------------------------


def isomorphism_to_json(result: PipelineResult):
    iso = result.isomorphism
    return {
        "n": iso.n,
        "idempotent": [polyrat.ratfunc_to_json(c) for c in result.idempotent.coords],
        "images": [
            [[polyrat.ratfunc_to_json(entry) for entry in row] for row in img]
            for img in iso.images
        ],
        "left_ideal": [
            [polyrat.ratfunc_to_json(c) for c in v.coords] for v in iso.left_ideal_basis
        ],
        "verified": result.verified,
        "report": {
            "dimC": result.report.dim,
            "dmin": result.report.d_min,
            "dmax": result.report.d_max,
        },
    }


def isomorphism_from_json(field, data):
    for key in ("n", "idempotent", "images", "left_ideal"):
        if key not in data:
            raise ValidationError(f"isomorphism file is missing '{key}'")
    n = data["n"]
    images = [
        [[polyrat.ratfunc_from_json(field, entry) for entry in row] for row in img]
        for img in data["images"]
    ]
    idem = [polyrat.ratfunc_from_json(field, c) for c in data["idempotent"]]
    left = [
        [polyrat.ratfunc_from_json(field, c) for c in v] for v in data["left_ideal"]
    ]
    return n, idem, images, left
