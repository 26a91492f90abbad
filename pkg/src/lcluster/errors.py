"""Exception hierarchy.

Everything derives from :class:`LClusterError`. The CLI maps
:class:`NoConvergence` to exit code 3 and every other subclass to 2.
"""


class LClusterError(Exception):
    exit_code = 2


class ValidationError(LClusterError, ValueError):
    pass


class ParseError(ValidationError):
    def __init__(self, line, message="malformed line"):
        self.line = line
        super().__init__(f"line {line}: {message}")


class ZeroOutDegree(ValidationError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} has zero out-weight")


class NotStronglyConnected(ValidationError):
    def __init__(self, component_count):
        self.component_count = component_count
        super().__init__(f"graph has {component_count} strongly connected components")


class NotConnected(ValidationError):
    def __init__(self, component_count):
        self.component_count = component_count
        super().__init__(f"hypergraph has {component_count} connected components")


class RowSumViolation(ValidationError):
    def __init__(self, row, total):
        self.row = row
        self.total = total
        super().__init__(f"row {row} sums to {total!r}, expected 1")


class EmptyHyperedge(ValidationError):
    def __init__(self, edge_id):
        self.edge_id = edge_id
        super().__init__(f"hyperedge {edge_id} has fewer than 2 members")


class IsolatedVertex(ValidationError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} belongs to no hyperedge")


class DuplicateAuthor(ValidationError):
    def __init__(self, edge, vertex):
        self.edge = edge
        self.vertex = vertex
        super().__init__(f"vertex {vertex} listed twice in hyperedge {edge}")


class InvalidVertex(ValidationError):
    def __init__(self, vertex, n=None):
        self.vertex = vertex
        msg = f"invalid vertex id {vertex}"
        if n is not None:
            msg += f" (n={n})"
        super().__init__(msg)


class EmptySeedSet(ValidationError):
    def __init__(self):
        super().__init__("seed set is empty")


class DegenerateSet(ValidationError):
    def __init__(self, what="vertex set is empty or the whole vertex set"):
        super().__init__(what)


class EmptySupport(ValidationError):
    def __init__(self):
        super().__init__("distribution has empty support")


class OutOfDomain(ValidationError):
    def __init__(self, k):
        self.k = k
        super().__init__(f"curve argument {k!r} outside [0, 1]")


class TooLarge(ValidationError):
    def __init__(self, n, n_cap):
        self.n = n
        self.n_cap = n_cap
        super().__init__(f"n={n} exceeds enumeration cap {n_cap}")


class InfeasibleSpec(ValidationError):
    pass


class ConfigError(ValidationError):
    pass


class NoConvergence(LClusterError, ArithmeticError):
    exit_code = 3

    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(f"no convergence after {iterations} iterations (residual {residual:.3e})")
