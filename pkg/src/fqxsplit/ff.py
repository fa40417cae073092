"""Arithmetic in finite fields F_{p^e}.

An element of F_{p^e} = F_p[y]/(modulus) with residue polynomial
c_0 + c_1*y + ... + c_{e-1}*y^{e-1} is stored as the plain int
sum(c_i * p**i).  A Field object carries the arithmetic; for small q every
binary operation is a table lookup.  Field objects also expose the digit
("plane") helpers used by the vectorised polynomial and lattice kernels:
a coefficient array of shape (..., e) holds the base-p digits of each
element along the last axis.
"""

from __future__ import annotations

import numpy as np

from .errors import NotPrime, Reducible, ValidationError

_TABLE_MAX_Q = 512  # full q*q lookup tables below this order


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


class Field:
    """The finite field F_{p^e}, elements encoded as ints in [0, q)."""

    planes_ok = True  # digit-plane numpy kernels apply to this field

    def __init__(self, p: int, e: int, modulus=None, _validated=False):
        if not _validated:
            raise ValidationError("use make_field() to construct fields")
        self.p = p
        self.e = e
        self.q = p**e
        # modulus: e+1 ints over F_p, monic, ascending degree; None for e == 1
        self.modulus = modulus
        self._mul_tab = None
        self._inv_tab = None
        self._add_tab = None
        self._proot_tab = None
        self._cmat_cache = {}
        if e > 1:
            # rows reducing y^(e+k) for k = 0..e-2 to digit vectors
            self._red_rows = self._reduction_rows()
            self._mul_tensor = self._build_mul_tensor()
        else:
            self._red_rows = None
            self._mul_tensor = np.ones((1, 1, 1), dtype=np.int64)
        if self.q <= _TABLE_MAX_Q:
            self._build_tables()

    # -- construction helpers -------------------------------------------

    def _reduction_rows(self):
        p, e, mod = self.p, self.e, self.modulus
        rows = []
        # y^e = -(mod[0] + ... + mod[e-1] y^{e-1})
        cur = [(-c) % p for c in mod[:e]]
        rows.append(list(cur))
        for _ in range(e - 2):
            shifted = [0] + cur[:-1]
            lead = cur[-1]
            cur = [(shifted[i] + lead * rows[0][i]) % p for i in range(e)]
            rows.append(list(cur))
        return np.array(rows, dtype=np.int64)

    def _build_mul_tensor(self):
        # T[a, b, k]: digit k of y^a * y^b after reduction
        e = self.e
        t = np.zeros((e, e, e), dtype=np.int64)
        for a in range(e):
            for b in range(e):
                d = a + b
                if d < e:
                    t[a, b, d] = 1
                else:
                    t[a, b, :] = self._red_rows[d - e]
        return t

    def _build_tables(self):
        q, e = self.q, self.e
        digs = self.to_planes(np.arange(q))  # (q, e)
        prod = np.einsum("ia,jb,abk->ijk", digs, digs, self._mul_tensor) % self.p
        self._mul_tab = self.from_planes(prod).tolist()
        if e > 1:
            sums = (digs[:, None, :] + digs[None, :, :]) % self.p
            self._add_tab = self.from_planes(sums).tolist()
        inv = [0] * q
        for a in range(1, q):
            row = self._mul_tab[a]
            for b in range(1, q):
                if row[b] == 1:
                    inv[a] = b
                    break
        self._inv_tab = inv
        self._proot_tab = [self._pth_root_slow(a) for a in range(q)]

    # -- digit/plane conversions ----------------------------------------

    def to_planes(self, arr) -> np.ndarray:
        """Base-p digits of int-encoded elements, new trailing axis of size e."""
        a = np.asarray(arr, dtype=np.int64)
        if self.e == 1:
            return a[..., None] % self.p
        out = np.empty(a.shape + (self.e,), dtype=np.int64)
        rest = a
        for i in range(self.e):
            rest, dig = divmod(rest, self.p)
            out[..., i] = dig
        return out

    def from_planes(self, planes) -> np.ndarray:
        a = np.asarray(planes, dtype=np.int64) % self.p
        weights = self.p ** np.arange(self.e, dtype=np.int64)
        return (a * weights).sum(axis=-1)

    def cmat(self, c: int) -> np.ndarray:
        """e x e matrix over F_p of multiplication by element c on digits."""
        m = self._cmat_cache.get(c)
        if m is None:
            digs = self.to_planes(c)
            m = np.tensordot(digs, self._mul_tensor, axes=(0, 0)) % self.p
            self._cmat_cache[c] = m
        return m

    # -- scalar arithmetic ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self._add_tab is not None:
            return self._add_tab[a][b]
        return self.encode([(x + y) % self.p for x, y in zip(self.decode(a), self.decode(b))])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        return self.encode([(-x) % self.p for x in self.decode(a)])

    def mul(self, a: int, b: int) -> int:
        if self._mul_tab is not None:
            return self._mul_tab[a][b]
        if self.e == 1:
            return (a * b) % self.p
        da, db = self.decode(a), self.decode(b)
        raw = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    raw[i + j] = (raw[i + j] + x * y) % self.p
        return self._encode_raw(raw)

    def _encode_raw(self, raw):
        e, p = self.e, self.p
        digs = raw[:e] + [0] * (e - len(raw))
        for k in range(e, len(raw)):
            c = raw[k]
            if c:
                row = self._red_rows[k - e]
                for i in range(e):
                    digs[i] = (digs[i] + c * int(row[i])) % p
        return self.encode(digs)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        if self._inv_tab is not None:
            return self._inv_tab[a]
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow_(a, self.q - 2)

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

    def frobenius(self, a: int) -> int:
        return self.pow_(a, self.p)

    def _pth_root_slow(self, a: int) -> int:
        # Frobenius is a bijection; its inverse is a |-> a^(p^(e-1))
        return self.pow_(a, self.p ** (self.e - 1))

    def pth_root(self, a: int) -> int:
        if self._proot_tab is not None:
            return self._proot_tab[a]
        return self._pth_root_slow(a)

    # -- encodings ---------------------------------------------------------

    def encode(self, coeffs) -> int:
        v = 0
        for c in reversed(list(coeffs)):
            v = v * self.p + int(c) % self.p
        return v

    def decode(self, a: int):
        digs = []
        for _ in range(self.e):
            a, d = divmod(a, self.p)
            digs.append(d)
        return digs

    def elem(self, value) -> "FieldElem":
        if isinstance(value, FieldElem):
            return value
        if isinstance(value, int):
            return FieldElem(self, value % self.q if self.e == 1 else value)
        return FieldElem(self, self.encode(value))

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and self.p == other.p
            and self.e == other.e
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.e, tuple(self.modulus or ())))

    def __repr__(self):
        if self.e == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.e}"


class FieldElem:
    """Thin wrapper giving field elements operator syntax and serialization."""

    __slots__ = ("field", "val")

    def __init__(self, field: Field, val: int):
        if not 0 <= val < field.q:
            raise ValidationError(f"element {val} out of range for {field}")
        self.field = field
        self.val = val

    @property
    def coeffs(self):
        """Residue-polynomial coefficients, ascending degree, length e."""
        return self.field.decode(self.val)

    def __add__(self, other):
        return FieldElem(self.field, self.field.add(self.val, other.val))

    def __sub__(self, other):
        return FieldElem(self.field, self.field.sub(self.val, other.val))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.val))

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul(self.val, other.val))

    def __truediv__(self, other):
        return FieldElem(self.field, self.field.div(self.val, other.val))

    def __pow__(self, n):
        return FieldElem(self.field, self.field.pow_(self.val, n))

    def __eq__(self, other):
        return isinstance(other, FieldElem) and self.val == other.val and self.field == other.field

    def __hash__(self):
        return hash((self.val, self.field.p, self.field.e))

    def __bool__(self):
        return self.val != 0

    def __repr__(self):
        return f"{self.field}({self.val})"


def pth_root(a: FieldElem) -> FieldElem:
    """The unique b with b^p = a (inverse Frobenius)."""
    return FieldElem(a.field, a.field.pth_root(a.val))


_field_cache = {}


def make_field(p: int, e: int = 1, modulus=None) -> Field:
    """Construct F_{p^e}.

    For e > 1 with no modulus supplied, the monic irreducible polynomial
    whose coefficient vector has the smallest base-p integer encoding is
    chosen, so repeated runs agree without storing the modulus.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise ValidationError("extension degree must be >= 1")
    key = (p, e, tuple(modulus) if modulus is not None else None)
    cached = _field_cache.get(key)
    if cached is not None:
        return cached
    if e == 1:
        if modulus is not None:
            raise ValidationError("prime fields take no modulus")
        fld = Field(p, 1, None, _validated=True)
    else:
        if modulus is None:
            modulus = _first_irreducible(p, e)
        else:
            modulus = [int(c) % p for c in modulus]
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise ValidationError("modulus must be monic of degree e")
            if not _is_irreducible_fp(p, modulus):
                raise Reducible(f"modulus {modulus} factors over F_{p}")
        fld = Field(p, e, modulus, _validated=True)
    _field_cache[key] = fld
    return fld


def _first_irreducible(p: int, e: int):
    for code in range(p**e):
        coeffs = []
        v = code
        for _ in range(e):
            v, d = divmod(v, p)
            coeffs.append(d)
        cand = coeffs + [1]
        if _is_irreducible_fp(p, cand):
            return cand
    raise ValidationError("no irreducible polynomial found")  # unreachable


def _is_irreducible_fp(p: int, coeffs) -> bool:
    # deferred import: polyrat's factoring oracle runs over the prime field
    from . import polyrat

    base = make_field(p, 1)
    f = polyrat.Poly(base, list(coeffs))
    return polyrat.is_irreducible(f)
