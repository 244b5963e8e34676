"""Exception types shared across the package."""


class GraphSectionsError(Exception):
    """Base class for every error raised by this package."""


class InvalidKey(GraphSectionsError, KeyError):
    def __init__(self, key, graph=None):
        self.key = key
        self.graph = graph
        where = f" in {graph!r}" if graph is not None else ""
        super().__init__(f"{key!r} is not a vertex{where}")

    def __str__(self):
        return self.args[0]


class DirectedGraph(GraphSectionsError):
    """Raised when an operation needs an undirected neighbourhood."""


class ZeroDegree(GraphSectionsError):
    pass


class NegativeLambda(GraphSectionsError, ValueError):
    pass


class SupportOutsideBall(GraphSectionsError, ValueError):
    def __init__(self, vertex, coefficient_vertex, radius):
        self.vertex = vertex
        self.coefficient_vertex = coefficient_vertex
        self.radius = radius
        super().__init__(
            f"row at {vertex!r} has a coefficient on {coefficient_vertex!r}, "
            f"outside the ball of radius {radius}"
        )


class FloatModeUnsupported(GraphSectionsError):
    """Raised when an exact scalar mode is required."""


class NoOffDiagonal(GraphSectionsError):
    pass


class PremiseFailed(GraphSectionsError):
    def __init__(self, vertex, position, status):
        self.vertex = vertex
        self.position = position
        self.status = status
        super().__init__(
            f"vertex {vertex!r} (position {position}) has no structural "
            f"maximum-principle certificate (status {status})"
        )


class EnumerationTooShort(GraphSectionsError):
    pass


class SingularSection(GraphSectionsError):
    """The section matrix has a nontrivial kernel.

    ``kernel`` holds an exact basis of the null space, ``k`` the section
    size that failed.
    """

    def __init__(self, k, kernel):
        self.k = k
        self.kernel = kernel
        super().__init__(
            f"section k={k} is singular (kernel dimension {len(kernel)})"
        )


class WindowExhausted(UserWarning):
    """Fewer vertices are reachable from the roots than were requested."""


class NotSimplicial(GraphSectionsError):
    """Raised when a vertex carries a loop where the graph must be simplicial."""
