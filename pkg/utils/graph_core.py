#!/usr/bin/env python3
"""
Graph Core Module
Weighted instances with exact 2x-scaled integer weights, path bookkeeping,
negative forest extraction and conservativeness certification.
"""

import logging
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from app.config import Config
from utils.errors import (
    BadTerminal, BadVertex, DuplicateEdge, InstanceError, NegativeCycleInForest,
    SelfLoop, UnknownEdge,
)

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]
Path = Tuple[int, ...]

SCALE = 2

OPEN = 'open'
PERMISSIVE = 'permissive'


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class WeightedInstance:
    """Undirected simple graph on 0..n-1 with scaled integer weights and terminals s, t.

    Instances are immutable; ``graph`` is a frozen networkx graph carrying the
    scaled weight in the ``weight`` edge attribute.
    """

    def __init__(self, n: int, weights: Mapping[Edge, int], s: int, t: int):
        self.n = n
        self.s = s
        self.t = t
        self._weights: Dict[Edge, int] = dict(sorted(weights.items()))
        neighbours: Dict[int, List[int]] = {v: [] for v in range(n)}
        for u, v in self._weights:
            neighbours[u].append(v)
            neighbours[v].append(u)
        self._adj = {v: tuple(sorted(ns)) for v, ns in neighbours.items()}

        graph = nx.Graph()
        graph.add_nodes_from(range(n))
        graph.add_weighted_edges_from((u, v, w) for (u, v), w in self._weights.items())
        self.graph = nx.freeze(graph)

        self._forest: Optional['NegativeForest'] = None
        self._key: Optional[Tuple] = None

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(self._weights)

    @property
    def weights(self) -> Mapping[Edge, int]:
        return MappingProxyType(self._weights)

    @property
    def m(self) -> int:
        return len(self._weights)

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self._weights

    def weight(self, u: int, v: int) -> int:
        try:
            return self._weights[norm_edge(u, v)]
        except KeyError:
            raise UnknownEdge(norm_edge(u, v)) from None

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adj[v]

    def negative_edges(self) -> Tuple[Edge, ...]:
        return tuple(e for e, w in self._weights.items() if w < 0)

    def key(self) -> Tuple:
        """Hashable content key (used for memoization)"""
        if self._key is None:
            self._key = (self.n, self.s, self.t, tuple(self._weights.items()))
        return self._key

    def __repr__(self) -> str:
        return f"WeightedInstance(n={self.n}, m={self.m}, s={self.s}, t={self.t})"


def build_instance(n: int, edges: Iterable[Sequence[int]], s: int, t: int) -> WeightedInstance:
    """Validate raw data (unscaled integer weights) and build a scaled instance"""
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise InstanceError(f"vertex count must be an integer >= 2, got {n!r}")
    for terminal in (s, t):
        if isinstance(terminal, bool) or not isinstance(terminal, int) or not 0 <= terminal < n:
            raise BadTerminal(s, t)
    if s == t:
        raise BadTerminal(s, t)

    weights: Dict[Edge, int] = {}
    for item in edges:
        if len(item) != 3:
            raise InstanceError(f"edge entry {item!r} must be [u, v, w]")
        u, v, w = item
        for x in (u, v):
            if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < n:
                raise BadVertex(x, n)
        if isinstance(w, bool) or not isinstance(w, int):
            raise InstanceError(f"weight {w!r} on {u}-{v} is not an integer")
        if u == v:
            raise SelfLoop(u)
        e = norm_edge(u, v)
        if e in weights:
            raise DuplicateEdge(e)
        weights[e] = SCALE * w

    logger.debug(f"Built instance n={n}, m={len(weights)}, s={s}, t={t}")
    return WeightedInstance(n, weights, s, t)


def instance_from_json(data: Mapping[str, Any]) -> WeightedInstance:
    """Parse the JSON instance format {"n", "edges": [[u, v, w], ...], "s", "t"}"""
    try:
        return build_instance(data['n'], data['edges'], data['s'], data['t'])
    except (KeyError, TypeError) as e:
        raise InstanceError(f"malformed instance document: {e}") from e


def instance_to_json(inst: WeightedInstance) -> Dict[str, Any]:
    """Inverse of instance_from_json; weights are written unscaled"""
    for w in inst.weights.values():
        if w % SCALE:
            raise InstanceError("instance carries half-integral weights and has no unscaled form")
    return {
        'n': inst.n,
        'edges': [[u, v, w // SCALE] for (u, v), w in inst.weights.items()],
        's': inst.s,
        't': inst.t,
    }


def restrict(inst: WeightedInstance,
             removed_vertices: Iterable[int] = (),
             removed_edges: Iterable[Edge] = (),
             added_edges: Optional[Mapping[Edge, int]] = None,
             n: Optional[int] = None,
             s: Optional[int] = None,
             t: Optional[int] = None) -> WeightedInstance:
    """Derive a scaled instance: deleted vertices stay as isolated ids so numbering is stable"""
    gone = set(removed_vertices)
    dropped = {norm_edge(*e) for e in removed_edges}
    weights = {e: w for e, w in inst.weights.items()
               if e not in dropped and e[0] not in gone and e[1] not in gone}
    for (u, v), w in (added_edges or {}).items():
        weights[norm_edge(u, v)] = w
    return WeightedInstance(inst.n if n is None else n, weights,
                            inst.s if s is None else s, inst.t if t is None else t)


def relabel(inst: WeightedInstance, permutation: Sequence[int]) -> WeightedInstance:
    """Rename vertex v to permutation[v]"""
    if sorted(permutation) != list(range(inst.n)):
        raise InstanceError("relabeling must be a permutation of the vertex ids")
    weights = {norm_edge(permutation[u], permutation[v]): w for (u, v), w in inst.weights.items()}
    return WeightedInstance(inst.n, weights, permutation[inst.s], permutation[inst.t])


# Paths and walks

def path_edges(path: Sequence[int]) -> List[Edge]:
    return [norm_edge(path[i], path[i + 1]) for i in range(len(path) - 1)]


def is_path(inst: WeightedInstance, path: Sequence[int]) -> bool:
    if not path or len(set(path)) != len(path):
        return False
    if any(not 0 <= v < inst.n for v in path):
        return False
    return all(inst.has_edge(u, v) for u, v in zip(path, path[1:]))


def path_weight(inst: WeightedInstance, path: Sequence[int]) -> int:
    return sum(inst.weight(u, v) for u, v in zip(path, path[1:]))


def subpath(path: Sequence[int], a: int, b: int) -> Path:
    """P[a, b] traversed from a to b"""
    i, j = path.index(a), path.index(b)
    if i <= j:
        return tuple(path[i:j + 1])
    return tuple(reversed(path[j:i + 1]))


def concat(*parts: Sequence[int]) -> Path:
    """Join paths that share their boundary vertices"""
    out: List[int] = []
    for part in parts:
        if not part:
            continue
        if out:
            if out[-1] != part[0]:
                raise ValueError(f"cannot join path ending at {out[-1]} with one starting at {part[0]}")
            out.extend(part[1:])
        else:
            out.extend(part)
    return tuple(out)


@dataclass(frozen=True)
class Walk:
    """Vertex sequence of a walk; vertices and edges may repeat"""
    vertices: Tuple[int, ...]

    @property
    def closed(self) -> bool:
        return len(self.vertices) > 1 and self.vertices[0] == self.vertices[-1]

    @property
    def edges(self) -> List[Edge]:
        return path_edges(self.vertices)


def weight_of(inst: WeightedInstance, items: Union[Walk, Iterable[Edge]]) -> int:
    """Exact scaled weight of an edge set, or of a walk counting multiplicity"""
    edges = items.edges if isinstance(items, Walk) else items
    return sum(inst.weight(u, v) for u, v in edges)


@dataclass(frozen=True)
class PathPair:
    first: Path
    second: Path
    weight: int
    mode: str = PERMISSIVE

    def __iter__(self):
        return iter((self.first, self.second))


def permissively_disjoint(p1: Sequence[int], p2: Sequence[int]) -> bool:
    """Shared vertices only where start or end names coincide, and no shared edge"""
    allowed = set()
    if p1[0] == p2[0]:
        allowed.add(p1[0])
    if p1[-1] == p2[-1]:
        allowed.add(p1[-1])
    if (set(p1) & set(p2)) - allowed:
        return False
    return not set(path_edges(p1)) & set(path_edges(p2))


def openly_disjoint(p1: Sequence[int], p2: Sequence[int], s: int, t: int) -> bool:
    if p1[0] != s or p2[0] != s or p1[-1] != t or p2[-1] != t:
        return False
    return permissively_disjoint(p1, p2)


def solution_is_valid(inst: WeightedInstance, p1: Sequence[int], p2: Sequence[int]) -> bool:
    return (is_path(inst, p1) and is_path(inst, p2)
            and openly_disjoint(p1, p2, inst.s, inst.t))


# Negative forest

@dataclass(frozen=True, eq=False)
class NegTree:
    """One component of the subgraph spanned by negative edges"""
    index: int
    vertices: FrozenSet[int]
    adjacency: Mapping[int, Tuple[int, ...]]
    weights: Mapping[Edge, int]
    parent: Mapping[int, Optional[int]] = field(repr=False)
    depth: Mapping[int, int] = field(repr=False)
    _depth_cache: Dict[int, Dict[int, int]] = field(default_factory=dict, repr=False)

    @property
    def root(self) -> int:
        return min(self.vertices)

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(self.weights)

    def __contains__(self, v: object) -> bool:
        return v in self.vertices

    def __len__(self) -> int:
        return len(self.vertices)

    def hop_depths(self, root: int) -> Dict[int, int]:
        """Number of tree edges from root to every vertex"""
        if root not in self._depth_cache:
            spanned = nx.Graph(list(self.weights))
            self._depth_cache[root] = dict(nx.single_source_shortest_path_length(spanned, root))
        return self._depth_cache[root]


def _make_tree(index: int, edges: Mapping[Edge, int]) -> NegTree:
    spanned = nx.Graph(sorted(edges))
    adjacency = {v: tuple(sorted(spanned[v])) for v in sorted(spanned)}
    root = min(adjacency)
    parent: Dict[int, Optional[int]] = {root: None}
    parent.update(nx.bfs_predecessors(spanned, root))
    depth = dict(nx.single_source_shortest_path_length(spanned, root))
    return NegTree(index=index, vertices=frozenset(adjacency),
                   adjacency=MappingProxyType(adjacency),
                   weights=MappingProxyType(dict(sorted(edges.items()))),
                   parent=MappingProxyType(parent), depth=MappingProxyType(depth))


@dataclass(frozen=True)
class NegativeForest:
    trees: Tuple[NegTree, ...]
    edge_to_tree: Mapping[Edge, int]
    vertex_to_tree: Mapping[int, int]

    @property
    def c(self) -> int:
        return len(self.trees)

    def tree_of(self, v: int) -> Optional[NegTree]:
        index = self.vertex_to_tree.get(v)
        return None if index is None else self.trees[index]

    def vertices(self) -> FrozenSet[int]:
        return frozenset(self.vertex_to_tree)


def negative_forest(inst: WeightedInstance) -> NegativeForest:
    """Components of G[E-], indexed by their smallest vertex"""
    if inst._forest is not None:
        return inst._forest

    spanned = nx.Graph()
    spanned.add_edges_from(inst.negative_edges())
    try:
        cycle_edges = nx.find_cycle(spanned)
    except nx.NetworkXNoCycle:
        cycle_edges = None
    if cycle_edges:
        cycle = [u for u, _ in cycle_edges]
        weight = sum(inst.weight(u, v) for u, v in cycle_edges)
        raise NegativeCycleInForest(cycle, weight)

    components = sorted(nx.connected_components(spanned), key=min)
    trees = []
    edge_to_tree: Dict[Edge, int] = {}
    vertex_to_tree: Dict[int, int] = {}
    for index, comp in enumerate(components):
        edges = {e: inst.weight(*e) for e in sorted(norm_edge(u, v) for u, v in spanned.subgraph(comp).edges)}
        trees.append(_make_tree(index, edges))
        for e in edges:
            edge_to_tree[e] = index
        for v in comp:
            vertex_to_tree[v] = index

    forest = NegativeForest(tuple(trees), MappingProxyType(edge_to_tree), MappingProxyType(vertex_to_tree))
    inst._forest = forest
    logger.debug(f"Negative forest: c={forest.c}, sizes={[len(T) for T in forest.trees]}")
    return forest


# Conservativeness

@dataclass(frozen=True)
class ConservativenessCertificate:
    ok: bool
    cycle: Tuple[int, ...] = ()
    weight: int = 0
    method: str = 'enumeration'

    def __bool__(self) -> bool:
        return self.ok


def cycle_weight(inst: WeightedInstance, cycle: Sequence[int]) -> int:
    return sum(inst.weight(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle)))


def split_into_cycles(edges: Iterable[Edge]) -> List[Tuple[int, ...]]:
    """Decompose an edge set with all degrees even into simple cycles"""
    remaining: Dict[int, List[int]] = {}
    for u, v in edges:
        remaining.setdefault(u, []).append(v)
        remaining.setdefault(v, []).append(u)
    for ns in remaining.values():
        ns.sort(reverse=True)

    def take(x: int) -> int:
        y = remaining[x].pop()
        remaining[y].remove(x)
        return y

    cycles = []
    for start in sorted(remaining):
        walk = [start]
        position = {start: 0}
        # the walk's last vertex keeps an odd remaining degree while the walk is longer than one vertex
        while remaining[walk[-1]]:
            y = take(walk[-1])
            if y in position:
                p = position[y]
                cycles.append(tuple(walk[p:]))
                for x in walk[p + 1:]:
                    del position[x]
                del walk[p + 1:]
            else:
                position[y] = len(walk)
                walk.append(y)
    return cycles


def is_conservative(inst: WeightedInstance, method: str = 'auto') -> ConservativenessCertificate:
    """Certify that no cycle has negative total weight, or return one that does"""
    if not inst.negative_edges():
        return ConservativenessCertificate(True, method='trivial')

    if method == 'auto':
        small = inst.n <= Config.CYCLE_ENUM_MAX_N and inst.m <= Config.CYCLE_ENUM_MAX_EDGES
        method = 'enumeration' if small else 'join'

    if method == 'enumeration':
        for cycle in nx.simple_cycles(inst.graph):
            weight = cycle_weight(inst, cycle)
            if weight < 0:
                logger.info(f"Negative cycle found by enumeration: {cycle} ({weight})")
                return ConservativenessCertificate(False, tuple(cycle), weight, method)
        return ConservativenessCertificate(True, method=method)

    # minimum-weight empty join: negative iff some cycle is negative
    from utils.conspath import minimum_weight_join
    join = minimum_weight_join(inst.graph, ())
    total = sum(inst.weight(u, v) for u, v in join)
    if total >= 0:
        return ConservativenessCertificate(True, method='join')
    worst = min(split_into_cycles(join), key=lambda cyc: cycle_weight(inst, cyc))
    weight = cycle_weight(inst, worst)
    logger.info(f"Negative cycle found by join: {list(worst)} ({weight})")
    return ConservativenessCertificate(False, worst, weight, 'join')
