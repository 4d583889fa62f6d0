#!/usr/bin/env python3
"""
Partial Solution Module
Dynamic program over the spine of a negative tree: auxiliary graphs, the
table of minimum-weight partial solutions and the permissively disjoint
({a1,a2},{b1,b2})-path pair built from it.
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

import networkx as nx

from app.config import Config
from utils import invariants
from utils.conspath import JoinSolver, PathResult
from utils.errors import TableOrderViolation
from utils.graph_core import (
    Edge, NegTree, NegativeForest, Path, PathPair, PERMISSIVE, WeightedInstance, concat,
    negative_forest, path_edges, path_weight,
)
from utils.treekit import Spine, build_spine, is_partial_solution, tree_path, tree_path_weight

logger = logging.getLogger(__name__)

ViewKey = Tuple[FrozenSet[int], FrozenSet[Edge]]


@dataclass(frozen=True, order=True)
class PartialSolutionKey:
    u: int
    v: int
    tau: int


@dataclass(frozen=True)
class PartialEntry:
    q1: Path
    q2: Path
    weight: int


def submasks(mask: int) -> List[int]:
    """All submasks of mask in increasing order"""
    subs = []
    sub = mask
    while True:
        subs.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    return sorted(subs)


def auxiliary_vertices(inst: WeightedInstance, spine: Spine, path: Path, u: int, v: int, tau: int,
                       forest: NegativeForest) -> FrozenSet[int]:
    """Vertices deleted to form the auxiliary graph for (path, u, v, tau)"""
    on_path = set(path)
    removed = set()
    for Ti in spine.subtrees:
        if not Ti & on_path:
            removed |= Ti
    removed |= on_path
    T = spine.tree
    for U in forest.trees:
        if U.index != T.index and not (tau >> U.index) & 1:
            removed |= U.vertices
    removed -= {u, v}
    return frozenset(removed)


def auxiliary_edges(path: Path, removed: FrozenSet[int]) -> FrozenSet[Edge]:
    """Edges of the path that survive the vertex deletion and must go as well"""
    return frozenset(e for e in path_edges(path) if e[0] not in removed and e[1] not in removed)


def _materialize(inst: WeightedInstance, removed: Iterable[int], dropped: Iterable[Edge]) -> nx.Graph:
    gone = set(removed)
    view = inst.graph.subgraph(x for x in inst.vertices if x not in gone).copy()
    view.remove_edges_from(dropped)
    return view


def auxiliary_graph(inst: WeightedInstance, spine: Spine, path: Path, u: int, v: int, tau: int,
                    forest: Optional[NegativeForest] = None) -> nx.Graph:
    """G minus the untouched subtrees, the path and the forbidden trees; u and v stay"""
    forest = forest or negative_forest(inst)
    removed = auxiliary_vertices(inst, spine, path, u, v, tau, forest)
    return _materialize(inst, removed, auxiliary_edges(path, removed))


class AuxiliaryRoutes:
    """Shortest paths in the auxiliary graphs of one instance.

    Views depend only on what they delete, so one cache serves every spine
    table built on the instance. Materialized views, with their distance
    caches and solved paths, are evicted least recently used first.
    """

    def __init__(self, inst: WeightedInstance, capacity: Optional[int] = None):
        self.inst = inst
        self.capacity = capacity or Config.AUX_VIEW_CACHE
        self._views: 'OrderedDict[ViewKey, Tuple[JoinSolver, Dict[Tuple[int, int], PathResult]]]' = OrderedDict()
        self.views_built = 0
        self.queries = 0

    def _view(self, key: ViewKey) -> Tuple[JoinSolver, Dict[Tuple[int, int], PathResult]]:
        cached = self._views.get(key)
        if cached is None:
            cached = JoinSolver(_materialize(self.inst, *key)), {}
            self._views[key] = cached
            self.views_built += 1
            if len(self._views) > self.capacity:
                self._views.popitem(last=False)
        else:
            self._views.move_to_end(key)
        return cached

    def shortest_path(self, removed: FrozenSet[int], dropped: FrozenSet[Edge], start: int, end: int) -> PathResult:
        self.queries += 1
        solver, paths = self._view((removed, dropped))
        if (start, end) not in paths:
            paths[(start, end)] = solver.path(start, end)
        return paths[(start, end)]


class PartialSolutionTable:
    """F(u, v, tau) for every key, filled in the order of the spine subtrees"""

    def __init__(self, inst: WeightedInstance, spine: Spine, forest: Optional[NegativeForest] = None,
                 routes: Optional[AuxiliaryRoutes] = None):
        self.inst = inst
        self.spine = spine
        self.forest = forest or negative_forest(inst)
        self.routes = routes or AuxiliaryRoutes(inst)
        T = spine.tree
        self.full_mask = 0
        for U in self.forest.trees:
            if U.index != T.index:
                self.full_mask |= 1 << U.index
        self.entries: Dict[PartialSolutionKey, Optional[PartialEntry]] = {}
        self.candidates_checked = 0

    def order(self) -> List[int]:
        """Total order on V(T) refining the subtree order"""
        label = self.spine.label
        return sorted(self.spine.tree.vertices, key=lambda x: (label[x], x))

    def keys(self) -> Iterator[PartialSolutionKey]:
        label = self.spine.label
        ordered = self.order()
        taus = submasks(self.full_mask)
        for u in ordered:
            for v in ordered:
                if label[v] < label[u]:
                    continue
                for tau in taus:
                    yield PartialSolutionKey(u, v, tau)

    def get(self, key: PartialSolutionKey) -> Optional[PartialEntry]:
        try:
            return self.entries[key]
        except KeyError:
            raise TableOrderViolation(key) from None

    def shortest_path(self, path: Path, start: int, end: int, tau: int) -> PathResult:
        """Shortest start-end path in the auxiliary graph G<path, start, end, tau>"""
        removed = auxiliary_vertices(self.inst, self.spine, path, start, end, tau, self.forest)
        return self.routes.shortest_path(removed, auxiliary_edges(path, removed), start, end)

    def fill(self) -> 'PartialSolutionTable':
        for key in self.keys():
            self.entries[key] = part_sol(key, self)
        stored = sum(1 for e in self.entries.values() if e is not None)
        logger.debug(f"Partial solution table on tree {self.spine.tree.index}: "
                      f"{stored}/{len(self.entries)} keys solved, {self.candidates_checked} candidates checked, "
                      f"{self.routes.views_built} auxiliary views built so far")
        return self


def _accept(table: PartialSolutionTable, q1: Path, q2: Path, key: PartialSolutionKey) -> bool:
    if len(set(q1)) != len(q1) or len(set(q2)) != len(q2):
        return False
    table.candidates_checked += 1
    return is_partial_solution(q1, q2, key.u, key.v, key.tau, table.spine, table.forest)


def _bridge_fits(T: NegTree, spine: Spine, j_prev: int, v_prev: int, i: int, tail_u: set) -> bool:
    """T[x_j', v'] avoids T[x_i, u], except for x_i itself when j' = i"""
    shared = set(tree_path(T, spine.x_at(j_prev), v_prev)) & tail_u
    if j_prev < i:
        return not shared
    return shared == {spine.x_at(i)}


def part_sol(key: PartialSolutionKey, table: PartialSolutionTable) -> Optional[PartialEntry]:
    """Minimum-weight partial solution for key, from Case A starts and Case B extensions"""
    spine, inst = table.spine, table.inst
    T = spine.tree
    label = spine.label
    u, v, tau = key.u, key.v, key.tau
    i = label[u]
    best: Optional[PartialEntry] = None

    # Case A: one path is A_h followed by the tree path to u
    for h in (1, 2):
        head = concat(spine.A(h), tree_path(T, spine.x[0], u))
        if len(set(head)) != len(head):
            continue
        other = spine.a(3 - h)
        found = table.shortest_path(head, other, v, tau)
        if found is None:
            continue
        route, route_weight = found
        weight = path_weight(inst, head) + route_weight
        if best is not None and weight >= best.weight:
            continue
        if _accept(table, head, route, key):
            best = PartialEntry(head, route, weight)

    # Case B: extend a partial solution ending in an earlier subtree
    tail_u = set(tree_path(T, spine.x_at(i), u))
    for i_prev in range(1, i):
        for u_prev in sorted(spine.subtree(i_prev)):
            for j_prev in range(i_prev + 1, i + 1):
                for v_prev in sorted(spine.subtree(j_prev)):
                    if not _bridge_fits(T, spine, j_prev, v_prev, i, tail_u):
                        continue
                    bridge = tree_path(T, v_prev, u)
                    bridge_weight = tree_path_weight(T, v_prev, u)
                    for tau_prev in submasks(tau):
                        entry = table.get(PartialSolutionKey(u_prev, v_prev, tau_prev))
                        if entry is None:
                            continue
                        found = table.shortest_path(bridge, u_prev, v, tau & ~tau_prev)
                        if found is None:
                            continue
                        route, route_weight = found
                        weight = entry.weight + bridge_weight + route_weight
                        if best is not None and weight >= best.weight:
                            continue
                        q1 = concat(entry.q2, bridge)
                        q2 = concat(entry.q1, route)
                        if _accept(table, q1, q2, key):
                            best = PartialEntry(q1, q2, weight)

    if best is not None and invariants.enabled():
        invariants.check(path_weight(inst, best.q1) + path_weight(inst, best.q2) == best.weight,
                         f"stored weight of F{(u, v, tau)} does not match its paths")
    return best


def perm_disjoint(inst: WeightedInstance, T: NegTree, a1: int, a2: int, b1: int, b2: int,
                  forest: Optional[NegativeForest] = None,
                  table: Optional[PartialSolutionTable] = None,
                  routes: Optional[AuxiliaryRoutes] = None) -> Optional[PathPair]:
    """Minimum-weight permissively disjoint ({a1,a2},{b1,b2})-paths.

    Terminal names are normalized by the spine first; the returned pair runs
    from {spine.a1, spine.a2} to {spine.b1, spine.b2}. Pass `routes` to share
    auxiliary shortest paths between calls on the same instance.
    """
    forest = forest or negative_forest(inst)
    spine = build_spine(T, a1, a2, b1, b2)
    if table is None:
        table = PartialSolutionTable(inst, spine, forest, routes)
    table.fill()

    best: Optional[PartialEntry] = None
    for u, v in ((spine.b1, spine.b2), (spine.b2, spine.b1)):
        entry = table.entries.get(PartialSolutionKey(u, v, table.full_mask))
        if entry is not None and (best is None or entry.weight < best.weight):
            best = entry
    if best is None:
        return None
    return PathPair(best.q1, best.q2, best.weight, PERMISSIVE)
