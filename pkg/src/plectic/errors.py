"""Exception hierarchy shared across the package."""


class PlecticError(Exception):
    """Base class for all package errors."""


class InsufficientPrecision(PlecticError):
    """A value is indistinguishable from zero (or a pivot/valuation cannot
    be certified) at the tracked precision."""


class NotASquare(PlecticError):
    """Square root requested of a non-residue; the quadratic extension is
    needed."""


class InvalidPeriod(PlecticError):
    """log_q requires a period q with positive valuation."""


class EmbeddingUnavailable(PlecticError):
    """The prime does not split in F, so no embedding into Q_p exists."""


class PrimeNotInert(PlecticError):
    """beta is a square at this side; the prime is not inert in E."""


class EmbeddingNotInert(PlecticError):
    """Fixed points are rational; the element does not generate the
    quadratic extension."""


class NotMultiplicative(PlecticError):
    """The local curve has good (or additive) reduction."""


class SchemaError(PlecticError):
    """Fixture file does not parse against the schema."""


class RadialContractViolation(PlecticError):
    """A radial-system matrix does not carry its base object to the object
    it is indexed by."""


class DepthExceeded(PlecticError):
    """A tree object fell outside the range indexed by the radial system."""


class OracleIncomplete(PlecticError):
    """The kappa table lacks the key for a queried group element."""


class OutOfDepth(PlecticError):
    """A set is not expressible in the ball algebra at the stored depth."""


class DegenerationUnderdetermined(PlecticError):
    """The nu-kernel conditions do not admit a solution for the base
    values."""


class LiftInconsistent(PlecticError):
    """The sparse lift system has no solution (corrupted fixture or wrong
    depth)."""
