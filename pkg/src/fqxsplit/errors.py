"""Exception types shared across the library.

The CLI maps these onto exit codes: NotSplit -> 2, ValidationError -> 3,
PromiseViolation -> 4.
"""


class FqxsplitError(Exception):
    """Base class for all library errors."""


class ValidationError(FqxsplitError):
    """Malformed input: bad parameters, bad files, broken invariants."""


class NotPrime(ValidationError):
    """Characteristic is not a prime number."""


class Reducible(ValidationError):
    """A polynomial required to be irreducible factors."""


class ZeroPolynomial(ValidationError):
    """The zero polynomial where a nonzero one is required."""


class NotSquare(ValidationError):
    """A square matrix is required."""


class Dependent(ValidationError):
    """Vectors required to be linearly independent are not."""


class NotFullRank(ValidationError):
    """Generators do not span a full lattice."""


class NotReduced(ValidationError):
    """A reduced basis (orthogonality defect 0) is required."""


class NotUnital(ValidationError):
    """The algebra has no two-sided identity element."""


class DegenerateBasis(ValidationError):
    """The Gram matrix of the trace form is singular on this basis."""


class DegenerateSeed(ValidationError):
    """Random sampling failed to produce a usable object for this seed."""


class NotIdempotentModRadical(ValidationError):
    """Element is not idempotent modulo the radical."""


class PromiseViolation(FqxsplitError):
    """The input broke the promise that it is a full matrix algebra."""


class RootFailure(PromiseViolation):
    """A required p^r-th root does not exist; the input is not split."""


class NotSplit(FqxsplitError):
    """No rank-1 idempotent exists: the algebra is not M_n(F_q(x))."""


class BadIdempotent(FqxsplitError):
    """An idempotent whose left ideal does not have dimension n."""


class VerificationFailure(FqxsplitError):
    """An exact verification check failed; indicates an internal bug."""
