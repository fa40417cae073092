"""Exact dense linear algebra over field scalars.

Three layers, all exact:

* generic routines over any scalar type with field operator overloads
  (used for matrices over F_q(x); pivoting prefers entries of small
  numerator-plus-denominator degree to limit expression swell);
* pure-int routines over a finite-field protocol object, for small systems;
* vectorised numpy routines on digit-plane arrays of shape (rows, cols, e),
  for the large F_q eliminations inside the order machinery.

Also hosts the division-free Berkowitz characteristic polynomial, which the
trace computations use to stay inside F_q[x].
"""

from __future__ import annotations

import numpy as np

from .errors import NotSquare, ValidationError


class Matrix:
    """Dense row-major matrix over an arbitrary scalar type."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries):
        entries = list(entries)
        if len(entries) != rows * cols:
            raise ValidationError("entry count does not match matrix shape")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rowlist):
        rows = len(rowlist)
        cols = len(rowlist[0]) if rows else 0
        flat = []
        for r in rowlist:
            if len(r) != cols:
                raise ValidationError("ragged rows")
            flat.extend(r)
        return cls(rows, cols, flat)

    def at(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def row(self, i: int):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self):
        return [self.row(i) for i in range(self.rows)]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})"


def _as_rows(M):
    if isinstance(M, Matrix):
        return M.to_rows()
    return [list(r) for r in M]


def _complexity(v) -> int:
    f = getattr(v, "complexity", None)
    return f() if f is not None else 0


def _sample_entry(rows):
    for r in rows:
        for v in r:
            return v
    return None


# -- generic elimination -------------------------------------------------------


def _rref(rows, ncols):
    """In-place reduced row echelon form; returns pivot column list."""
    pivots = []
    r = 0
    nrows = len(rows)
    for col in range(ncols):
        best = None
        for i in range(r, nrows):
            if rows[i][col]:
                if best is None or _complexity(rows[i][col]) < _complexity(rows[best][col]):
                    best = i
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        inv = rows[r][col].one_like() / rows[r][col]
        rows[r] = [inv * v for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][col]:
                c = rows[i][col]
                rows[i] = [a - c * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return pivots


def rank(M) -> int:
    rows = _as_rows(M)
    if not rows:
        return 0
    return len(_rref(rows, len(rows[0])))


def determinant(M):
    """Exact determinant by ordinary Gaussian elimination over the field."""
    rows = _as_rows(M)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NotSquare("determinant needs a square matrix")
    if n == 0:
        raise NotSquare("empty matrix")
    sample = rows[0][0]
    det = sample.one_like()
    zero = sample.zero_like()
    for col in range(n):
        best = None
        for i in range(col, n):
            if rows[i][col]:
                if best is None or _complexity(rows[i][col]) < _complexity(rows[best][col]):
                    best = i
        if best is None:
            return zero
        if best != col:
            rows[col], rows[best] = rows[best], rows[col]
            det = zero - det
        piv = rows[col][col]
        det = det * piv
        inv = piv.one_like() / piv
        for i in range(col + 1, n):
            if rows[i][col]:
                c = rows[i][col] * inv
                rows[i] = [a - c * b for a, b in zip(rows[i], rows[col])]
    return det


def kernel(M, one=None):
    """Basis of the right null space {v : Mv = 0}."""
    rows = _as_rows(M)
    if not rows:
        raise ValidationError("kernel of an empty matrix is ambiguous")
    ncols = len(rows[0])
    sample = _sample_entry(rows)
    if one is None:
        one = sample.one_like()
    zero = one.zero_like()
    work = [list(r) for r in rows]
    pivots = _rref(work, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [zero] * ncols
        v[free] = one
        for r, pc in enumerate(pivots):
            v[pc] = zero - work[r][free]
        basis.append(v)
    return basis


def solve(M, b):
    """Any solution of Mz = b, or None when the system is inconsistent."""
    rows = _as_rows(M)
    nrows = len(rows)
    if nrows != len(b):
        raise ValidationError("dimension mismatch in solve")
    if nrows == 0:
        return []
    ncols = len(rows[0])
    aug = [list(r) + [b[i]] for i, r in enumerate(rows)]
    pivots = _rref(aug, ncols)
    sample = _sample_entry(rows) or b[0]
    zero = sample.zero_like()
    # inconsistent iff a row is (0 ... 0 | nonzero)
    for r in range(len(pivots), nrows):
        if aug[r][ncols]:
            return None
    sol = [zero] * ncols
    for r, pc in enumerate(pivots):
        sol[pc] = aug[r][ncols]
    return sol


def inverse(M):
    rows = _as_rows(M)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NotSquare("inverse needs a square matrix")
    one = rows[0][0].one_like()
    zero = one.zero_like()
    aug = [list(rows[i]) + [one if j == i else zero for j in range(n)] for i in range(n)]
    pivots = _rref(aug, n)
    if len(pivots) != n:
        return None
    return [row[n:] for row in aug]


def mat_mul(A, B):
    n, k = len(A), len(B)
    m = len(B[0])
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            acc = None
            for t in range(k):
                term = Ai[t] * B[t][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def mat_vec(A, v):
    out = []
    for row in A:
        acc = None
        for a, x in zip(row, v):
            term = a * x
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def identity_rows(n, zero, one):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


# -- Berkowitz characteristic polynomial ----------------------------------------


def charpoly_berkowitz(rows, zero, one):
    """Characteristic polynomial det(X*I - M), coefficients ascending.

    Division-free, so it works verbatim over F_q[x]; entries only need
    +, -, * (ring operations).
    """
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NotSquare("characteristic polynomial needs a square matrix")
    if n == 0:
        return [one]
    cp = [one, zero - rows[0][0]]
    for i in range(1, n):
        t = [one, zero - rows[i][i]]
        col = [rows[j][i] for j in range(i)]
        for k in range(i):
            s = zero
            for j in range(i):
                if rows[i][j] and col[j]:
                    s = s + rows[i][j] * col[j]
            t.append(zero - s)
            if k < i - 1:
                col = [
                    _dot(rows[j][:i], col, zero) for j in range(i)
                ]
        new = []
        for k in range(i + 2):
            acc = zero
            lo = max(0, k - len(t) + 1)
            for j in range(lo, min(k, len(cp) - 1) + 1):
                acc = acc + t[k - j] * cp[j]
            new.append(acc)
        cp = new
    cp.reverse()
    return cp


def _dot(row, col, zero):
    acc = zero
    for a, b in zip(row, col):
        if a and b:
            acc = acc + a * b
    return acc


# -- finite-field int routines ---------------------------------------------------


def ff_rref(field, rows):
    """Reduced row echelon form over a finite field; rows of ints, in place."""
    pivots = []
    nrows = len(rows)
    if nrows == 0:
        return rows, pivots
    ncols = len(rows[0])
    mul, add, neg, inv = field.mul, field.add, field.neg, field.inv
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        c = inv(rows[r][col])
        if c != 1:
            rows[r] = [mul(c, v) for v in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r and rows[i][col]:
                f = neg(rows[i][col])
                rows[i] = [add(v, mul(f, w)) for v, w in zip(rows[i], prow)]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def ff_kernel(field, rows):
    """Right null space basis over a finite field (vectors of ints)."""
    if not rows:
        raise ValidationError("kernel of an empty matrix is ambiguous")
    ncols = len(rows[0])
    work = [list(r) for r in rows]
    work, pivots = ff_rref(field, work)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [0] * ncols
        v[free] = 1
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(work[r][free])
        basis.append(v)
    return basis


def ff_solve(field, rows, rhs):
    """Solve over a finite field; returns int vector or None."""
    nrows = len(rows)
    if nrows != len(rhs):
        raise ValidationError("dimension mismatch in ff_solve")
    if nrows == 0:
        return []
    ncols = len(rows[0])
    aug = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    aug, pivots = ff_rref(field, aug)
    if pivots and pivots[-1] == ncols:
        return None
    for r in range(len(pivots), nrows):
        if aug[r][ncols]:
            return None
    sol = [0] * ncols
    for r, pc in enumerate(pivots):
        sol[pc] = aug[r][ncols]
    return sol


def ff_matinv(field, rows):
    """Inverse of a square int matrix over a finite field, or None."""
    n = len(rows)
    aug = [list(rows[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    aug, pivots = ff_rref(field, aug)
    if len(pivots) != n or pivots != list(range(n)):
        return None
    return [row[n:] for row in aug]


# -- digit-plane numpy routines ---------------------------------------------------


def planes_scale(field, arr: np.ndarray, c: int) -> np.ndarray:
    """Multiply a plane array (..., e) by the field scalar c."""
    if c == 0:
        return np.zeros_like(arr)
    if field.e == 1:
        return (arr * c) % field.p
    return (arr @ field.cmat(c)) % field.p


def planes_rref(field, A: np.ndarray):
    """RREF of a plane array of shape (rows, cols, e); returns (R, pivots)."""
    A = A.copy()
    nrows, ncols, e = A.shape
    p = field.p
    pivots = []
    r = 0
    tensor = field._mul_tensor
    for col in range(ncols):
        if r >= nrows:
            break
        nz = A[r:, col, :].any(axis=1)
        idx = np.nonzero(nz)[0]
        if idx.size == 0:
            continue
        piv = r + int(idx[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        c = int(field.from_planes(A[r, col]))
        if c != 1:
            A[r] = planes_scale(field, A[r], field.inv(c))
        mask = A[:, col, :].any(axis=1)
        mask[r] = False
        if mask.any():
            rowsel = np.nonzero(mask)[0]
            factors = A[rowsel, col, :]  # (k, e)
            prow = A[r]  # (cols, e)
            if e == 1:
                upd = factors[:, 0][:, None, None] * prow[None, :, :]
            else:
                upd = np.einsum("ra,cb,abk->rck", factors, prow, tensor)
            A[rowsel] = (A[rowsel] - upd) % p
        pivots.append(col)
        r += 1
    return A, pivots


def planes_kernel(field, A: np.ndarray) -> np.ndarray:
    """Kernel basis of a plane matrix; returns shape (k, cols, e)."""
    R, pivots = planes_rref(field, A)
    nrows, ncols, e = A.shape
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    out = np.zeros((len(free), ncols, e), dtype=np.int64)
    for t, fc in enumerate(free):
        out[t, fc, 0] = 1
        for r, pc in enumerate(pivots):
            out[t, pc] = (-R[r, fc]) % field.p
    return out
