#!/usr/bin/env python3
"""
Tree Toolkit Module
Tree paths, spine decomposition, shortcut amendment and the path-shape
predicates used by the dynamic program.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, List, Mapping, NamedTuple, Optional, Sequence, Set, Tuple

import networkx as nx

from utils import invariants
from utils.errors import BadStart, EmptyIntersection, VertexNotInTree
from utils.graph_core import (
    Edge, NegTree, NegativeForest, Path, WeightedInstance, norm_edge, path_edges,
    path_weight, permissively_disjoint,
)

logger = logging.getLogger(__name__)


def tree_path(T: NegTree, a: int, b: int) -> Path:
    """The unique a-b path inside T"""
    for x in (a, b):
        if x not in T.vertices:
            raise VertexNotInTree(x, T.index)
    left, right = [a], [b]
    x, y = a, b
    while T.depth[x] > T.depth[y]:
        x = T.parent[x]
        left.append(x)
    while T.depth[y] > T.depth[x]:
        y = T.parent[y]
        right.append(y)
    while x != y:
        x = T.parent[x]
        y = T.parent[y]
        left.append(x)
        right.append(y)
    return tuple(left + right[-2::-1])


def tree_path_weight(T: NegTree, a: int, b: int) -> int:
    path = tree_path(T, a, b)
    return sum(T.weights[norm_edge(u, v)] for u, v in zip(path, path[1:]))


# Spine decomposition

@dataclass(frozen=True, eq=False)
class Spine:
    """X = T[a1,b1] ∩ T[a2,b2] with the subtree labelling T_1..T_r.

    Names are normalized so that a1, a2 hang off x_1 and b1, b2 off x_r.
    """
    tree: NegTree
    a1: int
    a2: int
    b1: int
    b2: int
    x: Tuple[int, ...]
    label: Mapping[int, int]
    subtrees: Tuple[FrozenSet[int], ...]
    swapped: bool

    @property
    def r(self) -> int:
        return len(self.x)

    def subtree(self, i: int) -> FrozenSet[int]:
        """Vertex set of T_i (1-based)"""
        return self.subtrees[i - 1]

    def x_at(self, i: int) -> int:
        return self.x[i - 1]

    def beyond(self, i: int) -> FrozenSet[int]:
        """Vertices of T_{i+1}, ..., T_r"""
        return frozenset().union(*self.subtrees[i:])

    @property
    def A1(self) -> Path:
        return tree_path(self.tree, self.a1, self.x[0])

    @property
    def A2(self) -> Path:
        return tree_path(self.tree, self.a2, self.x[0])

    @property
    def B1(self) -> Path:
        return tree_path(self.tree, self.b1, self.x[-1])

    @property
    def B2(self) -> Path:
        return tree_path(self.tree, self.b2, self.x[-1])

    def A(self, h: int) -> Path:
        return self.A1 if h == 1 else self.A2

    def a(self, h: int) -> int:
        return self.a1 if h == 1 else self.a2


@lru_cache(maxsize=4096)
def build_spine(T: NegTree, a1: int, a2: int, b1: int, b2: int) -> Spine:
    p1 = tree_path(T, a1, b1)
    p2 = tree_path(T, a2, b2)
    if not set(path_edges(p1)) & set(path_edges(p2)):
        raise EmptyIntersection(f"T[{a1},{b1}] and T[{a2},{b2}] share no edge in tree {T.index}")

    on_p2 = set(p2)
    x = tuple(v for v in p1 if v in on_p2)
    # cutting the spine edges leaves one component per x_i
    hanging = nx.Graph(list(T.weights))
    hanging.remove_edges_from(path_edges(x))
    label: Dict[int, int] = {}
    for i, xi in enumerate(x, 1):
        for z in nx.node_connected_component(hanging, xi):
            label[z] = i

    swapped = False
    if label[a2] != 1:
        a2, b2 = b2, a2
        swapped = True
    subtrees = tuple(frozenset(v for v, i in label.items() if i == k) for k in range(1, len(x) + 1))
    logger.debug(f"Spine on tree {T.index}: X={x}, swapped={swapped}")
    return Spine(T, a1, a2, b1, b2, x, label, subtrees, swapped)


# Shortcuts

@dataclass(frozen=True)
class Shortcut:
    tree_index: int
    z: int
    z_prime: int
    interior: Path
    on_path: int


def find_shortcuts(p1: Sequence[int], p2: Sequence[int], forest: NegativeForest) -> List[Shortcut]:
    """All shortcuts for the pair, ordered by tree index then endpoint ids"""
    on1, on2 = set(p1), set(p2)
    on = on1 | on2
    used = set(path_edges(p1)) | set(path_edges(p2))
    found: List[Shortcut] = []
    for T in forest.trees:
        hit = sorted(v for v in T.vertices if v in on)
        if len(hit) < 2:
            continue
        for z in hit:
            seen = {z}
            stack = [(y, z) for y in reversed(T.adjacency[z])]
            while stack:
                y, prev = stack.pop()
                if y in seen:
                    continue
                seen.add(y)
                if y in on:
                    if y < z:
                        continue
                    if prev == z and norm_edge(z, y) in used:
                        continue
                    if z in on1 and y in on1:
                        which = 1
                    elif z in on2 and y in on2:
                        which = 2
                    else:
                        continue
                    found.append(Shortcut(T.index, z, y, tree_path(T, z, y), which))
                    continue
                for w in reversed(T.adjacency[y]):
                    if w not in seen:
                        stack.append((w, y))
    found.sort(key=lambda sc: (sc.tree_index, sc.z, sc.z_prime))
    return found


def is_locally_cheapest(p1: Sequence[int], p2: Sequence[int], forest: NegativeForest) -> bool:
    return not find_shortcuts(p1, p2, forest)


def amend(p1: Sequence[int], p2: Sequence[int], forest: NegativeForest,
          inst: Optional[WeightedInstance] = None) -> Tuple[Path, Path]:
    """Replace shortcut-spanned subpaths by tree paths until none is left"""
    paths = [tuple(p1), tuple(p2)]
    steps = 0
    while True:
        shortcuts = find_shortcuts(paths[0], paths[1], forest)
        if not shortcuts:
            break
        sc = shortcuts[0]
        k = sc.on_path - 1
        path = paths[k]
        i, j = path.index(sc.z), path.index(sc.z_prime)
        if i > j:
            i, j = j, i
        segment = tree_path(forest.trees[sc.tree_index], path[i], path[j])
        if inst is not None and invariants.enabled():
            replaced = path_weight(inst, path[i:j + 1])
            gain = -path_weight(inst, segment)
            invariants.check(replaced >= gain > 0,
                             f"amending {sc.z}-{sc.z_prime} replaces weight {replaced} with {-gain}")
        paths[k] = path[:i] + segment + path[j + 1:]
        steps += 1
    if steps:
        logger.debug(f"Amend applied {steps} shortcut(s)")
    return paths[0], paths[1]


# Shape predicates

class ShapeReport(NamedTuple):
    x_monotone: bool
    plain: bool
    quasi_monotone: bool


def shape_predicates(q: Sequence[int], spine: Spine) -> ShapeReport:
    if q[0] not in (spine.a1, spine.a2):
        raise BadStart(q[0])
    label = spine.label
    visits = [(pos, label[v]) for pos, v in enumerate(q) if v in label]

    x_monotone = all(l1 <= l2 for (_, l1), (_, l2) in zip(visits, visits[1:]))

    edges = set(path_edges(q))
    position = {v: pos for pos, v in enumerate(q)}
    plain = True
    quasi = True
    for i, xi in enumerate(spine.x, 1):
        if xi not in position:
            continue
        p = position[xi]
        for pos, lab in visits:
            if lab == i and plain:
                segment = tree_path(spine.tree, q[pos], xi)
                if not all(e in edges for e in path_edges(segment)):
                    plain = False
            if (lab < i and pos > p) or (lab > i and pos < p):
                quasi = False
    return ShapeReport(x_monotone, plain, quasi)


def partial_solution_violation(q1: Sequence[int], q2: Sequence[int], u: int, v: int, tau: int,
                               spine: Spine, forest: NegativeForest) -> Optional[str]:
    """First violated partial-solution condition ('a'..'f'), or None"""
    T = spine.tree
    label = spine.label
    if u not in label or v not in label or label[u] > label[v]:
        return 'key'
    if not q1 or not q2 or len(set(q1)) != len(q1) or len(set(q2)) != len(q2):
        return 'a'
    starts = sorted((q1[0], q2[0]))
    if starts != sorted((spine.a1, spine.a2)):
        return 'a'
    if q1[-1] != u or q2[-1] != v or not permissively_disjoint(q1, q2):
        return 'a'

    i = label[u]
    tail = tree_path(T, spine.x_at(i), u)
    if len(q1) < len(tail) or tuple(q1[-len(tail):]) != tail:
        return 'c'

    if (set(q2) & spine.beyond(i)) - {v}:
        return 'd'

    touched: Dict[int, Tuple[Set[int], Set[int]]] = {}
    for k, q in enumerate((q1, q2)):
        for x in q:
            idx = forest.vertex_to_tree.get(x)
            if idx is None or idx == T.index:
                continue
            if not (tau >> idx) & 1:
                return 'e'
            touched.setdefault(idx, (set(), set()))[k].add(x)
    for left, right in touched.values():
        if left and right and len(left | right) >= 2:
            return 'f'

    for q in (q1, q2):
        shape = shape_predicates(q, spine)
        if not (shape.plain and shape.quasi_monotone):
            return 'b'
    if find_shortcuts(q1, q2, forest):
        return 'b'
    return None


def is_partial_solution(q1: Sequence[int], q2: Sequence[int], u: int, v: int, tau: int,
                        spine: Spine, forest: NegativeForest) -> bool:
    return partial_solution_violation(q1, q2, u, v, tau, spine, forest) is None


# Contact structure of solutions

def contact_trees(p1: Sequence[int], p2: Sequence[int], forest: NegativeForest) -> List[int]:
    """Trees sharing distinct vertices with P1 and P2"""
    on1, on2 = set(p1), set(p2)
    result = []
    for T in forest.trees:
        left = on1 & T.vertices
        right = on2 & T.vertices
        if left and right and len(left | right) >= 2:
            result.append(T.index)
    return result


def first_last_on_tree(path: Sequence[int], T: NegTree) -> Optional[Tuple[int, int]]:
    inside = [v for v in path if v in T.vertices]
    if not inside:
        return None
    return inside[0], inside[-1]


def _induces_path(T: NegTree, vertices: Set[int]) -> bool:
    degree = {v: 0 for v in vertices}
    count = 0
    for a, b in T.weights:
        if a in vertices and b in vertices:
            degree[a] += 1
            degree[b] += 1
            count += 1
    return count == len(vertices) - 1 and all(d <= 2 for d in degree.values())


def classify_solution(p1: Sequence[int], p2: Sequence[int], inst: WeightedInstance,
                      forest: NegativeForest) -> str:
    contacts = contact_trees(p1, p2, forest)
    if not contacts:
        return 'strongly-separable'
    if len(contacts) > 1:
        return 'non-separable'
    T = forest.trees[contacts[0]]
    if not all(_induces_path(T, set(p) & T.vertices) for p in (p1, p2)):
        return 'non-separable'
    if inst.s in T.vertices or inst.t in T.vertices:
        return 'strongly-separable'
    return 'separable'


def tvalid_partition(p1: Sequence[int], p2: Sequence[int], T: NegTree, forest: NegativeForest
                     ) -> Optional[Tuple[FrozenSet[int], FrozenSet[int], FrozenSet[int]]]:
    """Split of the other trees into before-T, between and after-T roles, if one exists"""
    before: Set[int] = set()
    after: Set[int] = set()
    between: Set[int] = set()
    for p in (p1, p2):
        ends = first_last_on_tree(p, T)
        if ends is None:
            return None
        i, j = p.index(ends[0]), p.index(ends[1])
        for part, bucket in ((p[:i + 1], before), (p[j:], after), (p[i:j + 1], between)):
            for x in part:
                idx = forest.vertex_to_tree.get(x)
                if idx is not None and idx != T.index:
                    bucket.add(idx)
    if before & after or (before | after) & between:
        return None
    others = {U.index for U in forest.trees if U.index != T.index}
    return frozenset(before), frozenset(others - before - after), frozenset(after)
