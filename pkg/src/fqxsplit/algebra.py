"""Structure-constant algebras over F_q(x).

An algebra of dimension m = n^2 is given by an m x m x m array of rational
functions gamma with a_i * a_j = sum_k gamma[i][j][k] a_k.  The reduced
trace of an element (its trace as an n x n matrix under any isomorphism
with M_n) is computed without knowing such an isomorphism: when the
characteristic divides n it is recovered from one coefficient of the
characteristic polynomial of the regular representation by a p^r-th root,
otherwise from the plain matrix trace divided by n.

Everything heavier than a single product runs on the scaled basis
a_i' = delta * a_i whose structure constants are polynomials, so the
inner loops stay in F_q[x].
"""

from __future__ import annotations

import math

from . import linalg, polyrat
from .errors import (
    DegenerateBasis,
    NotUnital,
    PromiseViolation,
    RootFailure,
    ValidationError,
)
from .polyrat import Poly, RatFunc


class StructureAlgebra:
    """An m = n^2 dimensional algebra over F_q(x) given by structure constants."""

    def __init__(self, field, gamma, check_associativity: bool = False):
        m = len(gamma)
        n = math.isqrt(m)
        if n * n != m:
            raise ValidationError(f"dimension {m} is not a perfect square")
        for block in gamma:
            if len(block) != m or any(len(row) != m for row in block):
                raise ValidationError("gamma must be an m x m x m array")
        self.field = field
        self.m = m
        self.n = n
        self.gamma = gamma
        r = 0
        k = n
        while k % field.p == 0:
            k //= field.p
            r += 1
        self.p_part = (r, k)
        # scaled basis a_i' = delta*a_i has polynomial structure constants
        delta = polyrat.one(field)
        d_n = 0
        d_d = 0
        for block in gamma:
            for row in block:
                for c in row:
                    if c.num:
                        delta = polyrat.lcm(delta, c.den)
                        d_n = max(d_n, int(c.num.deg))
                        d_d = max(d_d, int(c.den.deg))
        self.delta = delta
        self.d_num = d_n
        self.d_den = d_d
        self.d_c = max(d_n, d_d, 1)
        self.gamma_scaled = [
            [
                [
                    (c.num * polyrat.divexact(delta, c.den)) if c.num else polyrat.zero(field)
                    for c in row
                ]
                for row in block
            ]
            for block in gamma
        ]
        self._identity = None
        self._tau = None
        self._gram_det = None
        if check_associativity:
            self.verify_associativity()

    # -- elements ---------------------------------------------------------

    def elem(self, coords) -> "AlgElem":
        coords = list(coords)
        if len(coords) != self.m:
            raise ValidationError("coordinate vector has wrong length")
        return AlgElem(self, coords)

    def zero(self) -> "AlgElem":
        return AlgElem(self, [polyrat.rat_zero(self.field) for _ in range(self.m)])

    def basis_elem(self, i: int) -> "AlgElem":
        coords = [polyrat.rat_zero(self.field) for _ in range(self.m)]
        coords[i] = polyrat.rat_one(self.field)
        return AlgElem(self, coords)

    def basis(self):
        return [self.basis_elem(i) for i in range(self.m)]

    def mul_coords(self, u, v):
        out = [polyrat.rat_zero(self.field) for _ in range(self.m)]
        for i, ui in enumerate(u):
            if not ui:
                continue
            gi = self.gamma[i]
            for j, vj in enumerate(v):
                if not vj:
                    continue
                c = ui * vj
                row = gi[j]
                for k in range(self.m):
                    if row[k]:
                        out[k] = out[k] + c * row[k]
        return out

    def mul_scaled_coords(self, u, v):
        """Product in the scaled basis: coordinate lists of Poly in, Poly out."""
        fld = self.field
        out = [polyrat.zero(fld) for _ in range(self.m)]
        gs = self.gamma_scaled
        for i, ui in enumerate(u):
            if not ui:
                continue
            gi = gs[i]
            for j, vj in enumerate(v):
                if not vj:
                    continue
                c = ui * vj
                row = gi[j]
                for k in range(self.m):
                    if row[k]:
                        out[k] = out[k] + c * row[k]
        return out

    def verify_associativity(self):
        """Check (a_i a_j) a_l = a_i (a_j a_l) on every basis triple; O(m^3) products."""
        basis = self.basis()
        for i in range(self.m):
            for j in range(self.m):
                left = basis[i] * basis[j]
                for l in range(self.m):
                    if (left * basis[l]).coords != (basis[i] * (basis[j] * basis[l])).coords:
                        raise ValidationError(
                            f"structure constants are not associative at ({i},{j},{l})"
                        )

    # -- identity and representations ----------------------------------------

    def _is_identity(self, coords) -> bool:
        """Check e*a_i = a_i and a_i*e = a_i through the scaled constants."""
        fld = self.field
        den = polyrat.one(fld)
        for c in coords:
            if c.num:
                den = polyrat.lcm(den, c.den)
        nums = [
            c.num * polyrat.divexact(den, c.den) if c.num else polyrat.zero(fld)
            for c in coords
        ]
        target = den * self.delta
        for i in range(self.m):
            for k in range(self.m):
                left = polyrat.zero(fld)
                right = polyrat.zero(fld)
                for j in range(self.m):
                    if nums[j]:
                        g1 = self.gamma_scaled[j][i][k]
                        if g1:
                            left = left + nums[j] * g1
                        g2 = self.gamma_scaled[i][j][k]
                        if g2:
                            right = right + nums[j] * g2
                expect = target if k == i else polyrat.zero(fld)
                if left != expect or right != expect:
                    return False
        return True

    def find_identity(self) -> "AlgElem":
        """The two-sided identity, found by solving e*s = s and verifying.

        For an invertible s the solution set of e*s = s is exactly {1}, so a
        few candidates s (basis elements, then deterministic pseudo-random
        combinations) give the identity after an exact two-sided check; the
        full m^2 x m system is the fallback that also certifies NotUnital.
        """
        if self._identity is not None:
            return self._identity
        import random as _random

        m = self.m
        rnd = _random.Random(0xE1)
        candidates = []
        for i in range(m):
            candidates.append(self.basis_elem(i).coords)
        for _ in range(8):
            candidates.append(
                [
                    RatFunc(polyrat.constant(self.field, rnd.randrange(self.field.q)))
                    for _ in range(m)
                ]
            )
        for s in candidates:
            # right multiplication by s: (e*s)_k = sum_j e_j (a_j s)_k
            cols = [self.mul_coords(self.basis_elem(j).coords, s) for j in range(m)]
            rows = [[cols[j][k] for j in range(m)] for k in range(m)]
            sol = linalg.solve(rows, s)
            if sol is None:
                continue
            if self._is_identity(sol):
                self._identity = AlgElem(self, sol)
                return self._identity
        # full system: e is a solution iff it is a left identity
        zero = polyrat.rat_zero(self.field)
        one = polyrat.rat_one(self.field)
        rows = []
        rhs = []
        for i in range(m):
            for k in range(m):
                rows.append([self.gamma[j][i][k] for j in range(m)])
                rhs.append(one if k == i else zero)
        sol = linalg.solve(rows, rhs)
        if sol is None or not self._is_identity(sol):
            raise NotUnital("the algebra has no two-sided identity element")
        self._identity = AlgElem(self, sol)
        return self._identity

    def regular_representation(self, a: "AlgElem"):
        """Matrix of left multiplication b -> a*b; column j holds a*a_j."""
        cols = []
        for j in range(self.m):
            cols.append(self.mul_coords(a.coords, self.basis_elem(j).coords))
        return linalg.Matrix(
            self.m, self.m, [cols[j][k] for k in range(self.m) for j in range(self.m)]
        )

    # -- reduced trace ----------------------------------------------------------

    def _trace_functional(self):
        """tr on the ambient basis, computed once and reused by linearity."""
        if self._tau is not None:
            return self._tau
        fld = self.field
        r, k = self.p_part
        tau = []
        if r == 0:
            ninv = fld.inv(self.n % fld.p)
            for j in range(self.m):
                acc = polyrat.rat_zero(fld)
                for i in range(self.m):
                    acc = acc + self.gamma[j][i][i]
                tau.append(acc * RatFunc(polyrat.constant(fld, ninv)))
        else:
            # trace of delta*a_j from the characteristic polynomial of its
            # (polynomial) regular representation in the scaled basis
            pr = fld.p**r
            kinv = fld.inv(k % fld.p)
            zero = polyrat.zero(fld)
            one = polyrat.one(fld)
            for j in range(self.m):
                rows = [
                    [self.gamma_scaled[j][i][t] for i in range(self.m)]
                    for t in range(self.m)
                ]
                cp = linalg.charpoly_berkowitz(rows, zero, one)
                c = cp[self.m - pr]
                root = polyrat.poly_pth_root(-c, r)
                if root is None:
                    raise RootFailure(
                        "characteristic polynomial coefficient is not a p^r-th power; "
                        "the input cannot be a full matrix algebra"
                    )
                # tr(a_j) = k^{-1} * root / delta
                tau.append(RatFunc(root.scale(kinv), self.delta))
        self._tau = tau
        return tau

    def reduced_trace(self, a: "AlgElem") -> RatFunc:
        tau = self._trace_functional()
        acc = polyrat.rat_zero(self.field)
        for c, t in zip(a.coords, tau):
            if c and t:
                acc = acc + c * t
        return acc

    def _ambient_gram_det(self) -> RatFunc:
        """det(tr(a_i a_j)), cached; the trace pairing on the input basis."""
        if self._gram_det is not None:
            return self._gram_det
        tau = self._trace_functional()
        m = self.m
        gram = []
        for i in range(m):
            row = []
            for j in range(m):
                acc = polyrat.rat_zero(self.field)
                for k in range(m):
                    g = self.gamma[i][j][k]
                    if g and tau[k]:
                        acc = acc + g * tau[k]
                row.append(acc)
            gram.append(row)
        self._gram_det = linalg.determinant(gram)
        return self._gram_det

    def discriminant(self, basis) -> Poly:
        """det(tr(b_i b_j)) in monic normal form.

        Bilinearity gives det = det(B)^2 * det(tr(a_i a_j)) for the
        coordinate matrix B, so only one determinant per call is needed.
        """
        m = self.m
        if len(basis) != m:
            raise ValidationError("discriminant needs m basis elements")
        bmat = [[basis[j].coords[i] for j in range(m)] for i in range(m)]
        detb = linalg.determinant(bmat)
        if not detb:
            raise DegenerateBasis("basis is linearly dependent")
        g = self._ambient_gram_det()
        if not g:
            raise DegenerateBasis("trace form is degenerate on the ambient basis")
        disc = detb * detb * g
        if not disc.is_polynomial():
            raise ValidationError(
                "discriminant is not integral on this basis; "
                "normalize the basis to an almost order first"
            )
        return disc.num.monic()

    # -- rank and minimal polynomial ------------------------------------------------

    def rank(self, a: "AlgElem") -> int:
        """dim(aA)/n; raises PromiseViolation when n does not divide dim(aA)."""
        cols = [self.mul_coords(a.coords, self.basis_elem(i).coords) for i in range(self.m)]
        dim = linalg.rank(cols)
        if dim % self.n:
            raise PromiseViolation(f"dim aA = {dim} is not a multiple of n = {self.n}")
        return dim // self.n

    def min_poly(self, a: "AlgElem"):
        """Monic minimal polynomial of a (coefficients ascending, as RatFunc)."""
        m = self.m
        fld = self.field
        zero = polyrat.rat_zero(fld)
        one = polyrat.rat_one(fld)
        reg = self.regular_representation(a).to_rows()
        power = linalg.identity_rows(m, zero, one)
        flats = []
        while True:
            flats.append([power[i][j] for i in range(m) for j in range(m)])
            # look for a dependence among I, M, ..., M^t
            if len(flats) >= 2:
                cols = [[flats[t][e] for t in range(len(flats) - 1)] for e in range(m * m)]
                rhs = [flats[-1][e] for e in range(m * m)]
                sol = linalg.solve(cols, rhs)
                if sol is not None:
                    coeffs = [zero - c for c in sol] + [one]
                    return coeffs
            power = linalg.mat_mul(reg, power)

    # -- serialization -----------------------------------------------------------------

    def to_json(self):
        fld = self.field
        out = {"p": fld.p, "e": fld.e, "dim": self.m}
        if fld.e > 1:
            out["modulus"] = list(fld.modulus)
        out["gamma"] = [
            [[polyrat.ratfunc_to_json(c) for c in row] for row in block]
            for block in self.gamma
        ]
        return out


class AlgElem:
    """Element of a StructureAlgebra: a coordinate vector in the ambient basis."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: StructureAlgebra, coords):
        self.algebra = algebra
        self.coords = list(coords)

    def __add__(self, other):
        return AlgElem(self.algebra, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        return AlgElem(self.algebra, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return AlgElem(self.algebra, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, AlgElem):
            return AlgElem(self.algebra, self.algebra.mul_coords(self.coords, other.coords))
        if isinstance(other, RatFunc):
            return AlgElem(self.algebra, [c * other for c in self.coords])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, RatFunc):
            return AlgElem(self.algebra, [other * c for c in self.coords])
        return NotImplemented

    def __eq__(self, other):
        return isinstance(other, AlgElem) and self.coords == other.coords

    def __bool__(self):
        return any(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self):
        return f"AlgElem({self.coords!r})"


def find_identity(A: StructureAlgebra) -> AlgElem:
    return A.find_identity()


def regular_representation(A: StructureAlgebra, a: AlgElem):
    return A.regular_representation(a)


def reduced_trace(A: StructureAlgebra, a: AlgElem) -> RatFunc:
    return A.reduced_trace(a)


def discriminant(A: StructureAlgebra, basis) -> Poly:
    return A.discriminant(basis)


def rank(A: StructureAlgebra, a: AlgElem) -> int:
    return A.rank(a)


def min_poly(A: StructureAlgebra, a: AlgElem):
    return A.min_poly(a)


# -- construction helpers and serialization ------------------------------------------


def matrix_units_algebra(field, n: int) -> StructureAlgebra:
    """M_n(F_q(x)) on the matrix-unit basis E_11, E_12, ..., E_nn (row-major)."""
    m = n * n
    zero = polyrat.rat_zero(field)
    one = polyrat.rat_one(field)
    gamma = [[[zero for _ in range(m)] for _ in range(m)] for _ in range(m)]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    # E_ab * E_cd = delta_bc E_ad
                    if b == c:
                        gamma[a * n + b][c * n + d][a * n + d] = one
    return StructureAlgebra(field, gamma)


def algebra_from_json(data, check_associativity: bool = False) -> StructureAlgebra:
    from . import ff

    if not isinstance(data, dict):
        raise ValidationError("algebra file must be a JSON object")
    for key in ("p", "e", "dim", "gamma"):
        if key not in data:
            raise ValidationError(f"algebra file is missing '{key}'")
    p, e, m = data["p"], data["e"], data["dim"]
    if not (isinstance(p, int) and isinstance(e, int) and isinstance(m, int)):
        raise ValidationError("p, e, dim must be integers")
    field = ff.make_field(p, e, data.get("modulus"))
    gamma_json = data["gamma"]
    if len(gamma_json) != m:
        raise ValidationError("gamma has wrong outer dimension")
    gamma = []
    for block in gamma_json:
        if len(block) != m:
            raise ValidationError("gamma has wrong middle dimension")
        gamma.append(
            [
                [polyrat.ratfunc_from_json(field, c) for c in row]
                for row in block
            ]
        )
        for row in gamma[-1]:
            if len(row) != m:
                raise ValidationError("gamma has wrong inner dimension")
    return StructureAlgebra(field, gamma, check_associativity=check_associativity)


def algebra_to_json(A: StructureAlgebra):
    return A.to_json()
