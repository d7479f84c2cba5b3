"""Exception types raised by the toolkit.

Validation errors carry a message naming the offending vertex or edge so
that CLI diagnostics can be acted on without re-reading the input file.
"""


class MagspecError(Exception):
    """Base class for all toolkit errors."""


class GraphError(MagspecError, ValueError):
    """Invalid graph data or an operation applied to unsuitable graph data."""


class NonPositiveWeight(GraphError):
    """A vertex weight or edge weight is zero or negative."""


class SelfLoop(GraphError):
    """An edge joins a vertex to itself."""


class DuplicateEdge(GraphError):
    """The same undirected edge appears more than once."""


class Disconnected(GraphError):
    """The vertex set is not connected by the given edges."""


class UnknownVertex(GraphError):
    """A vertex id is not part of the graph (or of a required mapping)."""


class NotAnEdge(GraphError):
    """An ordered pair does not correspond to an edge of the graph."""


class EmptyFrontier(GraphError):
    """A frontier-dependent operation received an empty frontier."""


class GraphFormatError(GraphError):
    """A document does not follow the graph JSON schema."""


class InvalidTree(GraphError):
    """An edge set is not a spanning tree of the graph."""


class MissingTarget(GraphError):
    """A basis cycle has no prescribed target angle."""


class DisconnectedSubgraph(GraphError):
    """A covering subgraph is not connected."""


class GeneratorFailure(MagspecError, RuntimeError):
    """A graph family generator raised while producing a truncation."""


class NoConvergence(MagspecError, RuntimeError):
    """The iterative eigensolver hit its iteration cap.

    Attributes:
        best_residual: smallest residual norm reached before giving up.
        iterations: matrix-vector products spent.
    """

    def __init__(self, message: str, best_residual: float = float("nan"),
                 iterations: int = 0):
        super().__init__(message)
        self.best_residual = best_residual
        self.iterations = iterations


class NotASolution(MagspecError, ValueError):
    """A vector fails the eigenpair residual precondition of an identity check."""
