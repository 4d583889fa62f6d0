"""
Error hierarchy for the disjoint paths solver.

Every error carries the witness that triggered it so that the CLI layer can
print a certificate instead of a bare message.
"""

from typing import Any, Optional, Sequence, Tuple


class SolverError(Exception):
    """Base class for all solver errors"""


# Instance construction

class InstanceError(SolverError):
    """Raised when raw instance data cannot be turned into a WeightedInstance"""


class SelfLoop(InstanceError):
    def __init__(self, vertex: int):
        super().__init__(f"self-loop at vertex {vertex}")
        self.vertex = vertex


class DuplicateEdge(InstanceError):
    def __init__(self, edge: Tuple[int, int]):
        super().__init__(f"duplicate edge {edge[0]}-{edge[1]}")
        self.edge = edge


class BadTerminal(InstanceError):
    def __init__(self, s: Any, t: Any):
        super().__init__(f"invalid terminals s={s}, t={t}")
        self.s = s
        self.t = t


class BadVertex(InstanceError):
    def __init__(self, vertex: Any, n: int):
        super().__init__(f"vertex {vertex} outside 0..{n - 1}")
        self.vertex = vertex


class UnknownEdge(SolverError):
    def __init__(self, edge: Tuple[int, int]):
        super().__init__(f"edge {edge[0]}-{edge[1]} is not in the instance")
        self.edge = edge


# Conservativeness

class _CycleError(SolverError):
    def __init__(self, message: str, cycle: Sequence[int], weight: Optional[int] = None):
        super().__init__(message)
        self.cycle = tuple(cycle)
        self.weight = weight


class NegativeCycleInForest(_CycleError):
    def __init__(self, cycle: Sequence[int], weight: Optional[int] = None):
        super().__init__(f"negative edges form a cycle {list(cycle)}", cycle, weight)


class NonConservativeInput(_CycleError):
    def __init__(self, cycle: Sequence[int], weight: Optional[int] = None):
        super().__init__(f"instance has a negative cycle {list(cycle)} (scaled weight {weight})", cycle, weight)


class NonConservativeView(_CycleError):
    def __init__(self, cycle: Sequence[int], weight: Optional[int] = None):
        super().__init__(f"graph view has a negative cycle {list(cycle)}", cycle, weight)


# Tree toolkit

class VertexNotInTree(SolverError):
    def __init__(self, vertex: int, tree_index: int):
        super().__init__(f"vertex {vertex} is not in tree {tree_index}")
        self.vertex = vertex
        self.tree_index = tree_index


class EmptyIntersection(SolverError):
    """The two terminal tree paths share no edge"""


class BadStart(SolverError):
    def __init__(self, vertex: int):
        super().__init__(f"path starts at {vertex}, expected a1 or a2")
        self.vertex = vertex


# Shortest paths and flows

class NegativeWeightSeen(SolverError):
    def __init__(self, edge: Tuple[int, int], weight: int):
        super().__init__(f"negative weight {weight} on {edge[0]}-{edge[1]}")
        self.edge = edge
        self.weight = weight


class BadSelection(SolverError):
    """Z does not pick exactly one vertex in each tree avoiding s and t"""


class NegativeCycleDetected(SolverError):
    """The flow network contains a directed cycle of negative cost"""


class NonIntegralFlow(SolverError):
    """The flow cannot be decomposed into unit paths"""


# Combining and dynamic programming

class PreconditionViolated(SolverError):
    def __init__(self, condition: str, witness: Any = None):
        super().__init__(f"precondition {condition} violated (witness: {witness})")
        self.condition = condition
        self.witness = witness


class TableOrderViolation(SolverError):
    def __init__(self, key: Any):
        super().__init__(f"partial solution for {key} requested before it was computed")
        self.key = key


# Oracle and generator

class TooLarge(SolverError):
    def __init__(self, n: int, limit: int):
        super().__init__(f"instance with n={n} exceeds the enumeration limit {limit}")
        self.n = n
        self.limit = limit


class ParamsInfeasible(SolverError):
    """Generator parameters admit no instance"""


class InvariantViolation(SolverError):
    """A debug assertion failed"""
