#!/usr/bin/env python3
"""
Conservative Shortest Path Module
Shortest u-v paths in undirected graphs whose weights may be negative but
admit no negative cycle, via the minimum-weight join construction.
"""

import logging
from typing import Callable, Dict, Iterable, List, Optional, Set, Tuple

import networkx as nx

from app.config import Config
from utils.errors import NegativeWeightSeen, NonConservativeView, TooLarge
from utils.graph_core import Edge, Path, norm_edge, path_edges, split_into_cycles

logger = logging.getLogger(__name__)

PathResult = Optional[Tuple[Path, int]]


def _weight(graph: nx.Graph, u: int, v: int) -> int:
    return graph[u][v]['weight']


def _abs_weight(u, v, data) -> int:
    return abs(data['weight'])


class JoinSolver:
    """Shortest paths between any two vertices of one fixed graph.

    Single-source Dijkstra runs (under |w| for joins, under w when the graph
    has no negative edge) are kept per source, so repeated queries on the
    same graph only pay for the matching step.
    """

    def __init__(self, graph: nx.Graph):
        self.graph = graph
        self.negative: Set[Edge] = {norm_edge(u, v) for u, v, w in graph.edges(data='weight') if w < 0}
        odd: Set[int] = set()
        for u, v in self.negative:
            odd ^= {u, v}
        self.odd = frozenset(odd)
        self._absolute: Dict[int, Tuple[Dict[int, int], Dict[int, List[int]]]] = {}
        self._signed: Dict[int, Tuple[Dict[int, int], Dict[int, List[int]]]] = {}

    def _reach(self, x: int) -> Tuple[Dict[int, int], Dict[int, List[int]]]:
        if x not in self._absolute:
            self._absolute[x] = nx.single_source_dijkstra(self.graph, x, weight=_abs_weight)
        return self._absolute[x]

    def join(self, terminals: Iterable[int]) -> Optional[Set[Edge]]:
        """Minimum-weight edge set whose odd-degree vertices are exactly `terminals`.

        With N the negative edges, F is a join iff F Δ N is a join for the
        terminals Δ odd(N), so we look for the cheapest such join under |w| via
        shortest paths and a perfect matching, then flip N back.
        """
        odd = set(self.odd)
        for x in terminals:
            odd ^= {x}
        targets = sorted(odd)

        join: Set[Edge] = set()
        if targets:
            closure = nx.Graph()
            closure.add_nodes_from(targets)
            for k, x in enumerate(targets):
                dist, _ = self._reach(x)
                for y in targets[k + 1:]:
                    if y in dist:
                        closure.add_edge(x, y, length=dist[y])
            if closure.number_of_edges():
                big = 1 + max(d for _, _, d in closure.edges(data='length'))
                for x, y, d in closure.edges(data='length'):
                    closure[x][y]['gain'] = big - d
            matching = nx.max_weight_matching(closure, maxcardinality=True, weight='gain')
            if 2 * len(matching) != len(targets):
                return None
            for x, y in matching:
                x, y = min(x, y), max(x, y)
                join ^= set(path_edges(self._reach(x)[1][y]))
        return join ^ self.negative

    def _join_path(self, u: int, v: int) -> PathResult:
        join = self.join((u, v))
        if join is None:
            return None
        path = _walk_in(join, u, v)
        if path is None:
            return None
        graph = self.graph
        weight = sum(_weight(graph, a, b) for a, b in path_edges(path))
        total = sum(_weight(graph, a, b) for a, b in join)
        if weight != total:
            rest = join - set(path_edges(path))
            cycles = split_into_cycles(rest)
            worst = min(cycles, key=lambda cyc: sum(_weight(graph, cyc[i], cyc[(i + 1) % len(cyc)])
                                                    for i in range(len(cyc))))
            raise NonConservativeView(worst)
        return path, weight

    def _dijkstra_path(self, u: int, v: int) -> PathResult:
        if u not in self._signed:
            self._signed[u] = nx.single_source_dijkstra(self.graph, u, weight='weight')
        dist, paths = self._signed[u]
        if v not in dist:
            return None
        return tuple(paths[v]), dist[v]

    def path(self, u: int, v: int) -> PathResult:
        """Minimum-weight u-v path, or None if v is unreachable"""
        if u not in self.graph or v not in self.graph:
            return None
        if u == v:
            return (u,), 0
        if not self.negative:
            return self._dijkstra_path(u, v)
        return self._join_path(u, v)


def minimum_weight_join(graph: nx.Graph, terminals: Iterable[int]) -> Optional[Set[Edge]]:
    """Minimum-weight join for `terminals`, or None if no join exists"""
    return JoinSolver(graph).join(terminals)


def _walk_in(edges: Set[Edge], u: int, v: int) -> Optional[Path]:
    """Fewest-edge u-v path inside an edge set"""
    walk = nx.Graph(sorted(edges))
    if u not in walk or v not in walk:
        return None
    try:
        return tuple(nx.shortest_path(walk, u, v))
    except nx.NetworkXNoPath:
        return None


def _join_path(graph: nx.Graph, u: int, v: int) -> PathResult:
    return JoinSolver(graph).path(u, v)


def _search_path(graph: nx.Graph, u: int, v: int) -> PathResult:
    """Exact depth-first branch and bound over simple paths (small views only)"""
    if graph.number_of_nodes() > Config.SEARCH_BACKEND_MAX_N:
        raise TooLarge(graph.number_of_nodes(), Config.SEARCH_BACKEND_MAX_N)
    negative = sorted(((norm_edge(a, b), w) for a, b, w in graph.edges(data='weight') if w < 0))
    best: List = [None, None]
    prefix = [u]
    on = {u}

    def bound() -> int:
        return sum(w for (a, b), w in negative if (a not in on or a == prefix[-1]) and (b not in on or b == prefix[-1]))

    def extend(weight: int) -> None:
        x = prefix[-1]
        if x == v:
            if best[1] is None or weight < best[1]:
                best[0], best[1] = tuple(prefix), weight
            return
        if best[1] is not None and weight + bound() >= best[1]:
            return
        for y in sorted(graph.neighbors(x)):
            if y in on:
                continue
            prefix.append(y)
            on.add(y)
            extend(weight + _weight(graph, x, y))
            on.discard(y)
            prefix.pop()

    extend(0)
    if best[0] is None:
        return None
    return best[0], best[1]


def _lexicographic(graph: nx.Graph, u: int, v: int, target: int,
                   oracle: Callable[[nx.Graph, int, int], PathResult]) -> Path:
    """Smallest vertex sequence among u-v paths of weight `target`"""
    prefix = [u]
    blocked = {u}
    remaining = target
    while prefix[-1] != v:
        x = prefix[-1]
        for y in sorted(graph.neighbors(x)):
            if y in blocked:
                continue
            w = _weight(graph, x, y)
            if y == v:
                if w == remaining:
                    break
                continue
            rest = oracle(graph.subgraph(n for n in graph if n not in blocked), y, v)
            if rest is not None and w + rest[1] == remaining:
                break
        else:
            raise NonConservativeView((), None)
        prefix.append(y)
        blocked.add(y)
        remaining -= w
    return tuple(prefix)


def conservative_shortest_path(graph: nx.Graph, u: int, v: int, backend: str = 'join',
                               canonical: bool = True) -> PathResult:
    """Minimum-weight u-v path in a conservative view, or None if disconnected.

    backend: 'join' (matching reduction) or 'search' (exact enumeration, small views).
    canonical: break ties by the lexicographically smallest vertex sequence.
    """
    if u not in graph or v not in graph:
        return None
    if u == v:
        return (u,), 0
    if not any(w < 0 for _, _, w in graph.edges(data='weight')):
        return nonneg_shortest_path(graph, u, v, canonical=canonical)

    solve = _search_path if backend == 'search' else _join_path
    result = solve(graph, u, v)
    if result is None or not canonical:
        return result
    path = _lexicographic(graph, u, v, result[1], solve)
    return path, result[1]


def _dijkstra_path(graph: nx.Graph, u: int, v: int) -> PathResult:
    try:
        dist, path = nx.single_source_dijkstra(graph, u, v, weight='weight')
    except (nx.NetworkXNoPath, nx.NodeNotFound):
        return None
    return tuple(path), dist


def nonneg_shortest_path(graph: nx.Graph, u: int, v: int, canonical: bool = True) -> PathResult:
    """Dijkstra on a view whose weights are all non-negative"""
    for a, b, w in graph.edges(data='weight'):
        if w < 0:
            raise NegativeWeightSeen(norm_edge(a, b), w)
    if u not in graph or v not in graph:
        return None
    if u == v:
        return (u,), 0
    result = _dijkstra_path(graph, u, v)
    if result is None or not canonical:
        return result
    return _lexicographic(graph, u, v, result[1], _dijkstra_path), result[1]
