"""Exception hierarchy shared by every module."""


class AlgebraError(Exception):
    """Base class for all domain errors raised by this package."""


class RingMismatch(AlgebraError):
    """Operands live in different coefficient or series rings."""


class NotAUnit(AlgebraError):
    """An inversion was requested for an element that is not a unit."""


class NotDivisible(AlgebraError):
    """Exact division has no solution; ``degree`` locates the failure."""

    def __init__(self, message: str, degree: int | None = None):
        super().__init__(message)
        self.degree = degree


class PrecisionExhausted(AlgebraError):
    """The known degree of an input is too small for the requested result."""


class ZeroConstantViolation(AlgebraError):
    """A substitution image has a nonzero constant term."""


class AxiomViolation(AlgebraError):
    """A candidate formal group law fails unit, symmetry or associativity."""


class MissingParam(AlgebraError):
    """A law was requested without one of its required parameters."""


class InternalInconsistency(AlgebraError):
    """Two computations that must agree did not; indicates a bug."""


class NotFiniteType(AlgebraError):
    """The Cartan matrix does not define a finite Weyl group within the size cap."""


class DegenerateWeights(AlgebraError):
    """A weight that must be nonzero is zero."""


class NotInAlgebra(AlgebraError):
    """A localized value failed to land back in the formal group algebra."""


class AssertionFailure(AlgebraError):
    """A structural assertion (e.g. a support bound) was violated."""
