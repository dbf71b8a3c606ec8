"""Exception hierarchy shared by all modules."""


class PercolativeError(Exception):
    """Base class for every error raised by this package."""


class ParityMismatch(PercolativeError, ValueError):
    pass


class BudgetExceeded(PercolativeError):
    """An enumeration would exceed the configured size budget."""


class ZeroPartition(PercolativeError):
    """No configuration of the graph has finite energy."""


class ZeroMass(PercolativeError):
    """A boundary condition or clamp admits no finite-energy extension."""


class NotTreeLike(PercolativeError):
    """The ball around a vertex is not isomorphic to the tree ball."""


class InfeasibleInit(PercolativeError, ValueError):
    pass


class ConflictingClamp(PercolativeError, ValueError):
    pass


class GraphError(PercolativeError, ValueError):
    """Invalid permutation data for a labeled regular graph."""


class NotABijection(GraphError):
    pass


class NotInvolution(GraphError):
    pass


class FixedPoint(GraphError):
    pass


class CoincidentGenerators(GraphError):
    pass


class GenerationFailure(PercolativeError):
    """Random graph sampling ran out of its resample budget."""
