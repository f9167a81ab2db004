"""Exception hierarchy for the gdrazin package."""


class GDrazinError(Exception):
    """Base class for all gdrazin errors."""


class AxiomViolation(GDrazinError):
    """A computed inverse fails the Drazin axioms, or the rank structure of
    the input is too ambiguous to decide an index reliably."""


class NotIdempotent(GDrazinError):
    """The projection handed to a Pierce split is not idempotent within tolerance."""


class NotTriangular(GDrazinError):
    """The off-triangle corner of a supposedly block-triangular matrix is nonzero."""


class ConvergenceError(GDrazinError):
    """A truncated series still has a non-negligible tail at the term cap."""


class PreconditionViolated(GDrazinError):
    """A formula was invoked on inputs that fail its hypothesis."""


class GenerationFailed(GDrazinError):
    """Instance generation could not satisfy the requested constraints."""


class ReconciliationError(GDrazinError):
    """Two routes that must agree (closed form vs general engine) disagree."""
