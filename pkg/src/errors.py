"""Exception hierarchy for graph construction, spectral analysis and simulation."""


class HierconError(Exception):
    """Base class for every error raised by the toolkit."""


# ==================== Graph ====================

class GraphError(HierconError, ValueError):
    """Raised when a graph or its generator parameters are invalid."""


class TooFewVertices(GraphError):
    pass


class EdgeOrderViolation(GraphError):
    """DAG edge whose child does not come after its parent."""


class ReverseOrderViolation(GraphError):
    """Reverse edge whose child does not come before its parent."""


class DuplicateEdge(GraphError):
    pass


class DuplicateReverseEdge(GraphError):
    pass


class NonPositiveWeight(GraphError):
    pass


class VertexOutOfRange(GraphError):
    pass


class InfeasibleReverseCount(GraphError):
    pass


class NotAStar(GraphError):
    pass


class GraphSpecError(GraphError):
    """Malformed graph spec file (bad JSON shape or unknown fields)."""


# ==================== Spectral ====================

class SpectralError(HierconError):
    pass


class ConvergenceFailure(SpectralError):
    """The eigensolver did not converge."""


class AllEigenvaluesZero(SpectralError):
    """No eigenvalue lies above the zero tolerance."""


class InvalidGains(HierconError, ValueError):
    pass


# ==================== Dynamics ====================

class DynamicsError(HierconError):
    pass


class DimensionMismatch(DynamicsError, ValueError):
    pass


class NoSpanningTree(DynamicsError):
    """The zero eigenvalue of the Laplacian is not simple."""


class InvalidSimulationConfig(DynamicsError, ValueError):
    pass


# ==================== Sweep ====================

class SweepError(HierconError):
    """Failure while building or analyzing one member of a graph family."""

    def __init__(self, n: int, message: str):
        super().__init__(f"n={n}: {message}")
        self.n = n
