"""Full F_q[x]-lattices in F_q(x)^m.

A vector is a list of RatFunc coordinates; its valuation is the maximum of
the coordinate valuations (-inf only for the zero vector).  Reduction
clears denominators by their least common multiple, runs a
leading-coefficient elimination over F_q[x] (repeatedly cancelling the top
term of the worst column with a kernel vector of the leading-coefficient
matrix), and divides the scalar back out.  The same engine reduces bases,
reduces rectangular generating sets (degrees never increase, zero vectors
are dropped), and extracts coordinates of lattice members against a
reduced basis.
"""

from __future__ import annotations

import numpy as np

from . import linalg, polyrat
from .errors import Dependent, NotFullRank, NotReduced, ValidationError
from .polyrat import NEG_INF, Poly, RatFunc


class LatticeBasis:
    """Ordered list of column vectors over F_q(x) spanning a full lattice."""

    __slots__ = ("m", "vectors")

    def __init__(self, m: int, vectors):
        vectors = [list(v) for v in vectors]
        for v in vectors:
            if len(v) != m:
                raise ValidationError("vector length does not match dimension")
        self.m = m
        self.vectors = vectors

    def __repr__(self):
        return f"LatticeBasis(m={self.m}, k={len(self.vectors)})"


class ReductionCertificate:
    """Unimodular witness: new basis = old basis x transform, OD dropped to 0."""

    __slots__ = ("od_before", "od_after", "transform")

    def __init__(self, od_before: int, od_after: int, transform):
        self.od_before = od_before
        self.od_after = od_after
        self.transform = transform  # m x m matrix of Poly over F_q[x]


def vector_valuation(vec):
    """max over coordinates of the degree valuation; -inf for the zero vector."""
    best = NEG_INF
    for r in vec:
        v = r.valuation()
        if v > best:
            best = v
    return best


def orthogonality_defect(vectors) -> int:
    """sum |b_i| - |det B| for m independent vectors; always >= 0."""
    m = len(vectors[0])
    if len(vectors) != m:
        raise ValidationError("orthogonality defect needs exactly m vectors")
    det = linalg.determinant([[vectors[j][i] for j in range(m)] for i in range(m)])
    if not det:
        raise Dependent("vectors are linearly dependent")
    total = 0
    for v in vectors:
        val = vector_valuation(v)
        if val == NEG_INF:
            raise Dependent("zero vector in basis")
        total += val
    return int(total - det.valuation())


# -- plane engine -----------------------------------------------------------


def _trim(arr: np.ndarray):
    """Drop trailing zero coefficient columns; returns (arr, degree)."""
    nz = arr.any(axis=(0, 2))
    idx = np.nonzero(nz)[0]
    if idx.size == 0:
        return arr[:, :0, :], NEG_INF
    d = int(idx[-1])
    return arr[:, : d + 1, :], d


def vectors_to_planes(field, vectors):
    """Clear denominators by their lcm; returns (columns, degrees, gamma)."""
    gamma = polyrat.one(field)
    for v in vectors:
        for r in v:
            gamma = polyrat.lcm(gamma, r.den) if r.num else gamma
    m = len(vectors[0]) if vectors else 0
    cols = []
    degs = []
    for v in vectors:
        polys = []
        for r in v:
            if r.num:
                polys.append(r.num * polyrat.divexact(gamma, r.den))
            else:
                polys.append(polyrat.zero(field))
        length = max((len(p.coeffs) for p in polys), default=0)
        arr = np.zeros((m, max(length, 1), field.e), dtype=np.int64)
        for i, p in enumerate(polys):
            if p.coeffs:
                arr[i, : len(p.coeffs), :] = polyrat.poly_to_planes(p)
        arr, d = _trim(arr)
        cols.append(arr)
        degs.append(d)
    return cols, degs, gamma


def planes_to_vector(field, arr: np.ndarray, gamma: Poly):
    """Turn a plane column back into a RatFunc vector, dividing by gamma."""
    out = []
    for i in range(arr.shape[0]):
        p = polyrat.planes_to_poly(field, arr[i])
        out.append(RatFunc(p, gamma))
    return out


def _lead_ints(field, arr: np.ndarray, d: int) -> list:
    return field.from_planes(arr[:, d, :]).tolist()


def plane_reduce(field, cols, degs, track: bool = False, drop_zero: bool = False):
    """Leading-coefficient elimination until the LC matrix has full rank.

    Returns (cols, degs, transform, det_scalar); transform is a k x k Poly
    matrix (None unless track), det_scalar the accumulated determinant of the
    applied column operations (a nonzero field element).
    """
    m = cols[0].shape[0] if cols else 0
    cols = list(cols)
    degs = list(degs)
    T = None
    if track:
        T = linalg.identity_rows(len(cols), polyrat.zero(field), polyrat.one(field))
    det_scalar = 1
    # drop zero columns up front (generators only)
    if drop_zero:
        keep = [i for i, d in enumerate(degs) if d != NEG_INF]
        cols = [cols[i] for i in keep]
        degs = [degs[i] for i in keep]
    while True:
        k = len(cols)
        if k == 0:
            break
        if any(d == NEG_INF for d in degs):
            raise Dependent("zero vector in lattice basis")
        lc_rows = [[0] * k for _ in range(m)]
        for j in range(k):
            col = _lead_ints(field, cols[j], degs[j])
            for i in range(m):
                lc_rows[i][j] = col[i]
        kern = linalg.ff_kernel(field, lc_rows)
        if not kern:
            break
        z = kern[0]
        support = [i for i, zi in enumerate(z) if zi]
        dmax = max(degs[i] for i in support)
        target = min(i for i in support if degs[i] == dmax)
        new = np.zeros((m, dmax + 1, field.e), dtype=np.int64)
        for i in support:
            s = dmax - degs[i]
            scaled = linalg.planes_scale(field, cols[i], z[i])
            new[:, s : s + cols[i].shape[1], :] += scaled
        new %= field.p
        new, nd = _trim(new)
        if track:
            zt = [
                Poly(field, [0] * (dmax - degs[i]) + [z[i]]) if i in support else None
                for i in range(k)
            ]
            for r in range(len(T)):
                acc = polyrat.zero(field)
                for i in support:
                    if T[r][i]:
                        acc = acc + T[r][i] * zt[i]
                T[r][target] = acc
        det_scalar = field.mul(det_scalar, z[target])
        if nd == NEG_INF:
            if not drop_zero:
                raise Dependent("vectors are linearly dependent")
            cols.pop(target)
            degs.pop(target)
            if track:
                for r in range(len(T)):
                    T[r].pop(target)
        else:
            cols[target] = new
            degs[target] = nd
    return cols, degs, T, det_scalar


def plane_lc_inverse(field, cols, degs):
    """Inverse of the leading-coefficient matrix of a reduced square basis."""
    m = cols[0].shape[0]
    if len(cols) != m:
        raise ValidationError("coordinate extraction needs a square basis")
    lc_rows = [[0] * m for _ in range(m)]
    for j in range(m):
        col = _lead_ints(field, cols[j], degs[j])
        for i in range(m):
            lc_rows[i][j] = col[i]
    inv = linalg.ff_matinv(field, lc_rows)
    if inv is None:
        raise NotReduced("basis is not reduced (singular leading-coefficient matrix)")
    return inv


def plane_coordinates(field, cols, degs, lc_inv, target: np.ndarray):
    """Coefficients of target in a reduced basis, or None if not in the lattice."""
    m = cols[0].shape[0]
    w, d = _trim(target % field.p)
    coeffs = [[] for _ in range(m)]  # sparse (exponent, scalar) per basis vector
    mul, add = field.mul, field.add
    while d != NEG_INF:
        lead = _lead_ints(field, w, d)
        z = []
        for r in range(m):
            acc = 0
            row = lc_inv[r]
            for i in range(m):
                if lead[i]:
                    acc = add(acc, mul(row[i], lead[i]))
            z.append(acc)
        upd = np.zeros((m, d + 1, field.e), dtype=np.int64)
        for i in range(m):
            if z[i]:
                s = d - degs[i]
                if s < 0:
                    return None
                coeffs[i].append((s, z[i]))
                upd[:, s : s + cols[i].shape[1], :] += linalg.planes_scale(
                    field, cols[i], z[i]
                )
        if w.shape[1] < d + 1:
            pad = np.zeros((m, d + 1, field.e), dtype=np.int64)
            pad[:, : w.shape[1], :] = w
            w = pad
        w = (w - upd) % field.p
        w, nd = _trim(w)
        if nd != NEG_INF and nd >= d:
            raise ValidationError("coordinate extraction failed to reduce degree")
        d = nd
    out = []
    for sparse in coeffs:
        if not sparse:
            out.append(polyrat.zero(field))
            continue
        length = max(s for s, _ in sparse) + 1
        arr = [0] * length
        for s, c in sparse:
            arr[s] = add(arr[s], c)
        out.append(Poly(field, arr))
    return out


# -- public operations ---------------------------------------------------------


def reduce_basis(basis: LatticeBasis):
    """Reduced basis of the same lattice plus a unimodular certificate."""
    m = basis.m
    if len(basis.vectors) != m:
        raise ValidationError("basis must have exactly m vectors")
    od_before = orthogonality_defect(basis.vectors)  # raises Dependent if singular
    field = basis.vectors[0][0].field
    cols, degs, gamma = vectors_to_planes(field, basis.vectors)
    cols, degs, T, _det = plane_reduce(field, cols, degs, track=True)
    new_vectors = [planes_to_vector(field, c, gamma) for c in cols]
    cert = ReductionCertificate(od_before, 0, T)
    return LatticeBasis(m, new_vectors), cert


def reduce_generators(gens) -> LatticeBasis:
    """Reduced basis of the lattice generated by k >= m vectors."""
    if not gens:
        raise NotFullRank("no generators")
    m = len(gens[0])
    field = None
    for v in gens:
        for r in v:
            field = r.field
            break
        if field:
            break
    if field is None:
        raise NotFullRank("no nonzero generator")
    cols, degs, gamma = vectors_to_planes(field, gens)
    cols, degs, _T, _det = plane_reduce(field, cols, degs, drop_zero=True)
    if len(cols) < m:
        raise NotFullRank(f"generators span rank {len(cols)} < {m}")
    vectors = [planes_to_vector(field, c, gamma) for c in cols]
    return LatticeBasis(m, vectors)


def bounded_elements(basis: LatticeBasis, k: int):
    """F_q-basis of the lattice elements of valuation <= k: the x^j * c_i."""
    if orthogonality_defect(basis.vectors) != 0:
        raise NotReduced("bounded_elements requires a reduced basis")
    field = basis.vectors[0][0].field
    vals = [vector_valuation(v) for v in basis.vectors]
    out = []
    j = 0
    while True:
        layer = []
        for v, val in zip(basis.vectors, vals):
            if j + val <= k:
                xj = RatFunc(polyrat.monomial(field, j))
                layer.append([xj * c for c in v])
        if not layer:
            break
        out.extend(layer)
        j += 1
    return out


def coordinates(basis_vectors, target):
    """Polynomial coefficients of target in a reduced basis, else None."""
    field = None
    for v in basis_vectors:
        for r in v:
            field = r.field
            break
        break
    everything = list(basis_vectors) + [target]
    cols, degs, _gamma = vectors_to_planes(field, everything)
    tcol = cols.pop()
    degs.pop()
    lc_inv = plane_lc_inverse(field, cols, degs)
    return plane_coordinates(field, cols, degs, lc_inv, tcol)


# -- serialization ----------------------------------------------------------------


def lattice_to_json(basis: LatticeBasis):
    return {
        "m": basis.m,
        "vectors": [[polyrat.ratfunc_to_json(r) for r in v] for v in basis.vectors],
    }


def lattice_from_json(field, data) -> LatticeBasis:
    if not isinstance(data, dict) or "m" not in data or "vectors" not in data:
        raise ValidationError("lattice file must contain 'm' and 'vectors'")
    m = data["m"]
    if not isinstance(m, int) or m < 1:
        raise ValidationError("lattice dimension must be a positive int")
    vectors = [
        [polyrat.ratfunc_from_json(field, r) for r in v] for v in data["vectors"]
    ]
    return LatticeBasis(m, vectors)
