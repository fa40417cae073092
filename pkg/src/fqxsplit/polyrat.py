"""Univariate polynomials over F_q and the rational function field F_q(x).

Polynomials are dense coefficient lists (ints in the field encoding,
ascending degree, no trailing zeros; the zero polynomial is the empty list
with degree -inf).  Rational functions are kept canonical at construction:
monic denominator, gcd(num, den) = 1, so valuation and equality are
structural.

Factoring over F_q is provided by a deterministic Berlekamp path for
q <= 16 and seeded Cantor-Zassenhaus otherwise.  The same code runs over
extension fields and over the residue-field wrappers of `finalg`, since it
only touches the field through its arithmetic protocol.
"""

from __future__ import annotations

import math
import random

import numpy as np

from .errors import ValidationError, ZeroPolynomial

NEG_INF = float("-inf")

_NUMPY_MUL_THRESHOLD = 144  # len(a)*len(b) above which convolution pays off
_NUMPY_P_LIMIT = 1 << 20  # keep int64 convolutions overflow-free


class Poly:
    """Dense univariate polynomial over a finite field."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs, normalize: bool = True):
        if normalize:
            coeffs = [int(c) for c in coeffs]
            while coeffs and coeffs[-1] == 0:
                coeffs.pop()
        self.field = field
        self.coeffs = coeffs

    # -- basic queries ----------------------------------------------------

    @property
    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == [1]

    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.coeffs == other.coeffs
            and self.field == other.field
        )

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*x^{i}" if i else f"{c}")
        return "Poly(" + " + ".join(terms) + ")"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        fld = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        add = fld.add
        for i, c in enumerate(b):
            out[i] = add(out[i], c)
        return Poly(fld, out)

    def __neg__(self):
        neg = self.field.neg
        return Poly(self.field, [neg(c) for c in self.coeffs], normalize=False)

    def __sub__(self, other):
        fld = self.field
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        add, neg = fld.add, fld.neg
        out = [0] * n
        for i, c in enumerate(a):
            out[i] = c
        for i, c in enumerate(b):
            out[i] = add(out[i], neg(c))
        return Poly(fld, out)

    def __mul__(self, other):
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(self.field, [], normalize=False)
        fld = self.field
        if (
            len(a) * len(b) >= _NUMPY_MUL_THRESHOLD
            and fld.p <= _NUMPY_P_LIMIT
            and getattr(fld, "planes_ok", False)
        ):
            return _mul_numpy(fld, a, b)
        mul, add = fld.mul, fld.add
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add(out[i + j], mul(x, y))
        return Poly(fld, out)

    def scale(self, c: int) -> "Poly":
        if c == 0:
            return Poly(self.field, [], normalize=False)
        if c == 1:
            return self
        mul = self.field.mul
        return Poly(self.field, [mul(c, a) for a in self.coeffs], normalize=False)

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k (k >= 0)."""
        if not self.coeffs or k == 0:
            return self
        return Poly(self.field, [0] * k + self.coeffs, normalize=False)

    def __divmod__(self, other):
        if not other.coeffs:
            raise ZeroPolynomial("division by the zero polynomial")
        if len(self.coeffs) < len(other.coeffs):
            return Poly(self.field, [], normalize=False), self
        nq = len(self.coeffs) - len(other.coeffs) + 1
        if nq * len(other.coeffs) >= 4096 and self.field.p <= _NUMPY_P_LIMIT:
            return _divmod_newton(self, other)
        return _divmod_school(self, other)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        return self.scale(self.field.inv(self.coeffs[-1]))

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def evaluate(self, a: int) -> int:
        fld = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = fld.add(fld.mul(acc, a), c)
        return acc

    def derivative(self) -> "Poly":
        fld = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            # i acts through the prime field
            out.append(fld.mul(i % fld.p, self.coeffs[i]))
        return Poly(fld, out)


def zero(field) -> Poly:
    return Poly(field, [], normalize=False)


def one(field) -> Poly:
    return Poly(field, [1], normalize=False)


def constant(field, c: int) -> Poly:
    return Poly(field, [c])


def x_poly(field) -> Poly:
    return Poly(field, [0, 1], normalize=False)


def monomial(field, k: int, c: int = 1) -> Poly:
    return Poly(field, [0] * k + [c])


# -- numpy-backed kernels ---------------------------------------------------


def poly_to_planes(f: Poly, length=None) -> np.ndarray:
    """Coefficient digits as an array of shape (length, e)."""
    fld = f.field
    n = len(f.coeffs) if length is None else length
    arr = np.zeros(max(n, 1), dtype=np.int64)
    if f.coeffs:
        arr[: len(f.coeffs)] = f.coeffs
    return fld.to_planes(arr)


def planes_to_poly(field, planes: np.ndarray) -> Poly:
    vals = field.from_planes(planes)
    return Poly(field, vals.tolist())


def _mul_numpy(fld, a, b) -> Poly:
    e = fld.e
    if e == 1:
        out = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return Poly(fld, (out % fld.p).tolist())
    pa = fld.to_planes(np.asarray(a, dtype=np.int64))
    pb = fld.to_planes(np.asarray(b, dtype=np.int64))
    acc = np.zeros((len(a) + len(b) - 1, 2 * e - 1), dtype=np.int64)
    for i in range(e):
        col = pa[:, i]
        if not col.any():
            continue
        for j in range(e):
            if pb[:, j].any():
                acc[:, i + j] += np.convolve(col, pb[:, j])
    res = acc[:, :e] % fld.p
    for k in range(e, 2 * e - 1):
        col = acc[:, k] % fld.p
        if col.any():
            res = (res + np.outer(col, fld._red_rows[k - e])) % fld.p
    return planes_to_poly(fld, res)


def _divmod_school(f: Poly, g: Poly):
    fld = f.field
    rem = list(f.coeffs)
    dg = len(g.coeffs) - 1
    inv_lc = fld.inv(g.coeffs[-1])
    quo = [0] * (len(rem) - dg)
    mul, add, neg = fld.mul, fld.add, fld.neg
    gc = g.coeffs
    for k in range(len(rem) - dg - 1, -1, -1):
        c = rem[k + dg]
        if c:
            c = mul(c, inv_lc)
            quo[k] = c
            nc = neg(c)
            for i in range(dg):
                if gc[i]:
                    rem[k + i] = add(rem[k + i], mul(nc, gc[i]))
            rem[k + dg] = 0
    return Poly(fld, quo), Poly(fld, rem)


def _truncated_mul(a: Poly, b: Poly, k: int) -> Poly:
    prod = a * b
    return Poly(a.field, prod.coeffs[:k])


def _series_inv(c: Poly, k: int) -> Poly:
    """Inverse of c modulo x^k (constant term must be nonzero)."""
    fld = c.field
    t = Poly(fld, [fld.inv(c.coeffs[0])], normalize=False)
    prec = 1
    two = constant(fld, fld.add(1, 1))
    while prec < k:
        prec = min(2 * prec, k)
        ct = _truncated_mul(Poly(fld, c.coeffs[:prec]), t, prec)
        t = _truncated_mul(t, two - ct, prec)
    return t


def _divmod_newton(f: Poly, g: Poly):
    fld = f.field
    k = len(f.coeffs) - len(g.coeffs) + 1
    rg = Poly(fld, list(reversed(g.coeffs)))
    rf = Poly(fld, list(reversed(f.coeffs))[:k])
    inv = _series_inv(rg, k)
    rq = _truncated_mul(rf, inv, k)
    qc = list(reversed(rq.coeffs + [0] * (k - len(rq.coeffs))))
    q = Poly(fld, qc)
    r = f - q * g
    return q, r


def divexact(f: Poly, g: Poly) -> Poly:
    q, r = divmod(f, g)
    if r:
        raise ValidationError("inexact polynomial division")
    return q


# -- gcd and friends ----------------------------------------------------------


def gcd(f: Poly, g: Poly) -> Poly:
    while g:
        f, g = g, f % g
    return f.monic()


def extended_gcd(f: Poly, g: Poly):
    """(d, s, t) with s*f + t*g = d, d monic."""
    fld = f.field
    r0, r1 = f, g
    s0, s1 = one(fld), zero(fld)
    t0, t1 = zero(fld), one(fld)
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0:
        c = fld.inv(r0.lc())
        r0, s0, t0 = r0.scale(c), s0.scale(c), t0.scale(c)
    return r0, s0, t0


def lcm(f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return zero(f.field)
    return divexact(f * g, gcd(f, g)).monic()


def pow_mod(base: Poly, n: int, mod: Poly) -> Poly:
    result = one(base.field)
    base = base % mod
    while n:
        if n & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        n >>= 1
    return result


def poly_pth_root(f: Poly, r: int = 1):
    """g with g^(p^r) = f, or None when no such polynomial exists."""
    fld = f.field
    if not f:
        return f
    pr = fld.p**r
    out = [0] * (len(f.coeffs) // pr + 1)
    for i, c in enumerate(f.coeffs):
        if c:
            if i % pr:
                return None
            root = c
            for _ in range(r):
                root = fld.pth_root(root)
            out[i // pr] = root
    return Poly(fld, out)


# -- factoring ----------------------------------------------------------------


class Factorization:
    """unit * prod(poly^mult) with monic, pairwise-distinct irreducible parts."""

    __slots__ = ("field", "unit", "factors")

    def __init__(self, field, unit: int, factors):
        self.field = field
        self.unit = unit
        self.factors = list(factors)

    def expand(self) -> Poly:
        acc = constant(self.field, self.unit)
        for g, m in self.factors:
            for _ in range(m):
                acc = acc * g
        return acc

    def __repr__(self):
        return f"Factorization(unit={self.unit}, factors={self.factors})"


def squarefree_decomposition(f: Poly):
    """List of (g, m) with f monic = prod g^m, g squarefree and pairwise coprime.

    Multiplicities prime to p come out of the derivative chain; multiples of
    p are recovered recursively from the p-th root of what the chain leaves
    behind, so the two groups never collide.
    """
    if f.deg <= 0:
        return []
    fld = f.field
    p = fld.p
    out = {}
    df = f.derivative()
    if not df:
        root = poly_pth_root(f, 1)
        for g, m in squarefree_decomposition(root.monic()):
            out[m * p] = g
        return [(g, m) for m, g in sorted(out.items())]
    c = gcd(f, df)
    w = divexact(f, c)
    i = 1
    while w.deg > 0:
        y = gcd(w, c)
        fac = divexact(w, y)
        if fac.deg > 0:
            out[i] = fac.monic()
        w = y
        c = divexact(c, y)
        i += 1
    if c.deg > 0:
        root = poly_pth_root(c, 1)
        for g, m in squarefree_decomposition(root.monic()):
            mm = m * p
            out[mm] = (out[mm] * g).monic() if mm in out else g
    return [(g, m) for m, g in sorted(out.items())]


def _berlekamp(f: Poly):
    """All monic irreducible factors of a squarefree monic f, q <= 16."""
    from . import linalg

    fld = f.field
    n = int(f.deg)
    if n <= 1:
        return [f]
    xq = pow_mod(x_poly(fld), fld.q, f)
    cols = []
    cur = one(fld)
    for _ in range(n):
        cols.append([cur.coeff(j) for j in range(n)])
        cur = (cur * xq) % f
    # rows of the system (B - I) v = 0, v the coefficient vector
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            rows[j][i] = cols[i][j]
    for i in range(n):
        rows[i][i] = fld.sub(rows[i][i], 1)
    basis = linalg.ff_kernel(fld, rows)
    k = len(basis)
    if k == 1:
        return [f]
    factors = [f]
    for vec in basis:
        v = Poly(fld, list(vec))
        if v.deg <= 0:
            continue
        if len(factors) == k:
            break
        new = []
        for g in factors:
            if g.deg == 1:
                new.append(g)
                continue
            rem = g
            vg = v % g
            for c in range(fld.q):
                if rem.deg <= 0:
                    break
                d = gcd(vg - constant(fld, c), rem)
                if d.deg > 0:
                    new.append(d)
                    rem = divexact(rem, d)
            if rem.deg > 0:
                new.append(rem)
        factors = new
    return factors


def _edf(g: Poly, d: int, rng: random.Random):
    """Split a product of distinct irreducibles, all of degree d."""
    if g.deg == d:
        return [g]
    fld = g.field
    q = fld.q
    n = int(g.deg)
    while True:
        t = Poly(fld, [rng.randrange(q) for _ in range(n)])
        if t.deg < 1:
            continue
        if fld.p == 2:
            # additive trace of t down to F_2
            ext = _dim_over_f2(fld) * d
            s = t
            acc = t
            for _ in range(ext - 1):
                acc = (acc * acc) % g
                s = s + acc
            h = gcd(s % g, g)
        else:
            s = pow_mod(t, (q**d - 1) // 2, g)
            h = gcd(s - one(fld), g)
        if 0 < h.deg < g.deg:
            return _edf(h.monic(), d, rng) + _edf(divexact(g, h.monic()).monic(), d, rng)


def _dim_over_f2(fld) -> int:
    d = 0
    q = fld.q
    while q > 1:
        q //= 2
        d += 1
    return d


def _factor_squarefree_cz(f: Poly, rng: random.Random):
    fld = f.field
    res = []
    rest = f
    h = x_poly(fld) % rest
    d = 0
    while rest.deg >= 2 * (d + 1):
        d += 1
        h = pow_mod(h, fld.q, rest)
        g = gcd(h - x_poly(fld), rest)
        if g.deg > 0:
            res.extend(_edf(g.monic(), d, rng))
            rest = divexact(rest, g)
            h = h % rest
    if rest.deg > 0:
        res.append(rest)
    return res


def factor_poly(f: Poly, seed: int = 0) -> Factorization:
    """Full factorization over F_q; deterministic for fixed (f, seed).

    Berlekamp (ignoring the seed) when q <= 16, Cantor-Zassenhaus otherwise.
    """
    if not f:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    fld = f.field
    unit = f.lc()
    f = f.monic()
    if f.deg == 0:
        return Factorization(fld, unit, [])
    rng = random.Random(seed)
    factors = []
    for g, mult in squarefree_decomposition(f):
        if fld.q <= 16:
            parts = _berlekamp(g)
        else:
            parts = _factor_squarefree_cz(g, rng)
        for part in parts:
            factors.append((part.monic(), mult))
    factors.sort(key=lambda t: (t[0].deg, list(reversed(t[0].coeffs))))
    return Factorization(fld, unit, factors)


def is_irreducible(f: Poly) -> bool:
    """Rabin's test: x^{q^n} = x mod f and gcd tests at maximal subfields."""
    if not f:
        raise ZeroPolynomial("zero polynomial")
    n = int(f.deg)
    if n == 0:
        return False
    if n == 1:
        return True
    fld = f.field
    df = f.derivative()
    if not df or gcd(f, df).deg > 0:
        # zero derivative means f is a p-th power of another polynomial
        return False
    x = x_poly(fld)
    primes = _prime_divisors(n)
    for t in primes:
        h = _frobenius_power(x, n // t, f)
        if gcd(h - x, f).deg > 0:
            return False
    h = _frobenius_power(x, n, f)
    return not (h - x)


def _frobenius_power(g: Poly, k: int, mod: Poly) -> Poly:
    # g^(q^k) mod `mod` by k successive q-th powers
    fld = g.field
    for _ in range(k):
        g = pow_mod(g, fld.q, mod)
    return g


def _prime_divisors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- rational functions --------------------------------------------------------


class RatFunc:
    """Element of F_q(x) in canonical form: monic denominator, coprime parts."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = None, reduce: bool = True):
        if den is None:
            den = one(num.field)
        if not den:
            raise ValidationError("rational function with zero denominator")
        if reduce:
            if not num:
                den = one(num.field)
            else:
                g = gcd(num, den)
                if g.deg > 0:
                    num = divexact(num, g)
                    den = divexact(den, g)
                c = den.lc()
                if c != 1:
                    ci = num.field.inv(c)
                    num = num.scale(ci)
                    den = den.scale(ci)
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    def valuation(self):
        """deg(num) - deg(den); -inf for zero."""
        if not self.num:
            return NEG_INF
        return int(self.num.deg - self.den.deg)

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.den.deg == 0

    def __bool__(self):
        return bool(self.num)

    def __add__(self, other):
        other = _coerce(other, self)
        if other is None:
            return NotImplemented
        num = self.num * other.den + other.num * self.den
        return RatFunc(num, self.den * other.den)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        other = _coerce(other, self)
        if other is None:
            return NotImplemented
        num = self.num * other.den - other.num * self.den
        return RatFunc(num, self.den * other.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduce=False)

    def __mul__(self, other):
        other = _coerce(other, self)
        if other is None:
            return NotImplemented
        if not self.num or not other.num:
            return RatFunc(zero(self.field), one(self.field), reduce=False)
        # cross-cancel first to keep the final gcd small
        g1 = gcd(self.num, other.den)
        g2 = gcd(other.num, self.den)
        n1 = divexact(self.num, g1) if g1.deg > 0 else self.num
        d2 = divexact(other.den, g1) if g1.deg > 0 else other.den
        n2 = divexact(other.num, g2) if g2.deg > 0 else other.num
        d1 = divexact(self.den, g2) if g2.deg > 0 else self.den
        num = n1 * n2
        den = d1 * d2
        c = den.lc()
        if c != 1:
            ci = self.field.inv(c)
            num, den = num.scale(ci), den.scale(ci)
        return RatFunc(num, den, reduce=False)

    def __truediv__(self, other):
        other = _coerce(other, self)
        if other is None:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return self * RatFunc(other.den, other.num)

    def __eq__(self, other):
        return (
            isinstance(other, RatFunc)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((tuple(self.num.coeffs), tuple(self.den.coeffs)))

    def __repr__(self):
        if self.den.is_one():
            return f"({self.num!r})"
        return f"({self.num!r})/({self.den!r})"

    def zero_like(self):
        return rat_zero(self.field)

    def one_like(self):
        return rat_one(self.field)

    def complexity(self) -> int:
        """Pivot-selection size estimate: numerator plus denominator degree."""
        if not self.num:
            return 0
        return int(self.num.deg + self.den.deg)


def _coerce(v, template: RatFunc):
    if isinstance(v, RatFunc):
        return v
    if isinstance(v, Poly):
        return RatFunc(v)
    return None


def rat_zero(field) -> RatFunc:
    return RatFunc(zero(field), one(field), reduce=False)


def rat_one(field) -> RatFunc:
    return RatFunc(one(field), one(field), reduce=False)


def rat_x(field) -> RatFunc:
    return RatFunc(x_poly(field), one(field), reduce=False)


def from_poly(f: Poly) -> RatFunc:
    return RatFunc(f)


def valuation(r: RatFunc):
    """Degree valuation of F_q(x): deg num - deg den, -inf at zero."""
    return r.valuation()


def is_in_R(r: RatFunc) -> bool:
    """Membership in the valuation ring of degree-<=-0 rational functions."""
    return r.valuation() <= 0


def flip_variable(r: RatFunc) -> RatFunc:
    """Rewrite r(x) as a rational function of y = 1/x.

    With d = max(deg num, deg den), returns (y^d num(1/y)) / (y^d den(1/y)):
    degrees never exceed d, and the map is involutive on canonical forms.
    """
    if not r.num:
        return r
    fld = r.field
    d = int(max(r.num.deg, r.den.deg))

    def rev(p: Poly) -> Poly:
        padded = p.coeffs + [0] * (d + 1 - len(p.coeffs))
        return Poly(fld, list(reversed(padded)))

    return RatFunc(rev(r.num), rev(r.den))


# -- serialization --------------------------------------------------------------


def poly_to_json(f: Poly):
    return [f.field.decode(c) for c in f.coeffs]


def poly_from_json(field, data) -> Poly:
    if not isinstance(data, list):
        raise ValidationError("polynomial must be a list of coefficient vectors")
    coeffs = []
    for v in data:
        if not isinstance(v, list) or len(v) != field.e:
            raise ValidationError(f"field element must be a list of {field.e} ints")
        for c in v:
            if not isinstance(c, int) or not 0 <= c < field.p:
                raise ValidationError(f"residue {c} out of range [0, {field.p})")
        coeffs.append(field.encode(v))
    return Poly(field, coeffs)


def ratfunc_to_json(r: RatFunc):
    return {"num": poly_to_json(r.num), "den": poly_to_json(r.den)}


def ratfunc_from_json(field, data) -> RatFunc:
    if not isinstance(data, dict) or "num" not in data or "den" not in data:
        raise ValidationError("rational function must be {'num': ..., 'den': ...}")
    num = poly_from_json(field, data["num"])
    den = poly_from_json(field, data["den"])
    if not den:
        raise ValidationError("rational function with zero denominator")
    return RatFunc(num, den)
