#!/usr/bin/env python3
"""
Oracle Module
Brute-force reference answers for small instances and the seeded generator of
conservative instances they are compared on.
"""

import logging
import random
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from app.config import Config
from utils.errors import ParamsInfeasible, TooLarge
from utils.graph_core import (
    OPEN, PERMISSIVE, Path, PathPair, WeightedInstance, build_instance, is_conservative,
    negative_forest, path_weight, permissively_disjoint,
)
from utils.treekit import (
    Spine, is_partial_solution, shape_predicates, tree_path,
)

logger = logging.getLogger(__name__)

Best = Optional[Tuple[int, PathPair]]


def guard_size(inst: WeightedInstance, limit: Optional[int] = None) -> None:
    """Raise TooLarge when the exhaustive oracles would not finish on inst"""
    limit = Config.ORACLE_MAX_N if limit is None else limit
    if inst.n > limit:
        raise TooLarge(inst.n, limit)


def paths_by_vertex_set(inst: WeightedInstance, source: int, target: int) -> Dict[int, Tuple[int, Path]]:
    """Cheapest simple source-target path for every vertex set (as a bitmask) that carries one.

    Subset dynamic program over (vertex set, last vertex); exponential in n.
    """
    start = 1 << source
    layer: Dict[Tuple[int, int], Tuple[int, Path]] = {(start, source): (0, (source,))}
    found: Dict[int, Tuple[int, Path]] = {}
    if source == target:
        found[start] = (0, (source,))
        return found
    while layer:
        nxt: Dict[Tuple[int, int], Tuple[int, Path]] = {}
        for (mask, x), (weight, path) in sorted(layer.items()):
            for y in inst.neighbors(x):
                bit = 1 << y
                if mask & bit:
                    continue
                cand = (weight + inst.weight(x, y), path + (y,))
                key = (mask | bit, y)
                if y == target:
                    if key[0] not in found or cand < found[key[0]]:
                        found[key[0]] = cand
                    continue
                if key not in nxt or cand < nxt[key]:
                    nxt[key] = cand
        layer = nxt
    return found


def brute_force_stdp(inst: WeightedInstance) -> Best:
    """Minimum total weight over all pairs of openly disjoint s-t paths"""
    guard_size(inst, Config.ORACLE_MAX_N)
    s, t = inst.s, inst.t
    ends = (1 << s) | (1 << t)
    table = sorted(paths_by_vertex_set(inst, s, t).items())
    best: Best = None
    for i, (m1, (w1, p1)) in enumerate(table):
        for m2, (w2, p2) in table[i + 1:]:
            if m1 & m2 != ends:
                continue
            if best is None or w1 + w2 < best[0]:
                first, second = sorted((p1, p2))
                best = (w1 + w2, PathPair(first, second, w1 + w2, OPEN))
    return best


def brute_force_perm_disjoint(inst: WeightedInstance, a1: int, a2: int, b1: int, b2: int) -> Best:
    """Minimum total weight over permissively disjoint ({a1,a2},{b1,b2})-paths"""
    guard_size(inst, Config.ORACLE_MAX_N)
    shared = 0
    if a1 == a2:
        shared |= 1 << a1
    if b1 == b2:
        shared |= 1 << b1
    cache: Dict[Tuple[int, int], List[Tuple[int, Tuple[int, Path]]]] = {}

    def table(x: int, y: int) -> List[Tuple[int, Tuple[int, Path]]]:
        if (x, y) not in cache:
            cache[(x, y)] = sorted(paths_by_vertex_set(inst, x, y).items())
        return cache[(x, y)]

    best: Best = None
    for e1, e2 in ((b1, b2), (b2, b1)):
        for m1, (w1, q1) in table(a1, e1):
            for m2, (w2, q2) in table(a2, e2):
                if (m1 & m2) & ~shared:
                    continue
                if best is not None and w1 + w2 >= best[0]:
                    continue
                if not permissively_disjoint(q1, q2):
                    continue
                best = (w1 + w2, PathPair(q1, q2, w1 + w2, PERMISSIVE))
    return best


def _simple_paths(graph: nx.Graph, x: int, y: int) -> List[Path]:
    if x == y:
        return [(x,)]
    return [tuple(p) for p in nx.all_simple_paths(graph, x, y)]


def brute_force_partial_solutions(inst: WeightedInstance, spine: Spine, key) -> Optional[int]:
    """Minimum weight over all pairs passing the partial-solution test for key (u, v, tau)"""
    guard_size(inst, Config.PARTSOL_ORACLE_MAX_N)
    forest = negative_forest(inst)
    u, v, tau = key.u, key.v, key.tau
    label = spine.label
    if label[u] > label[v]:
        return None
    i = label[u]
    tail = tree_path(spine.tree, spine.x_at(i), u)
    beyond = spine.beyond(i)

    def usable(q: Path) -> bool:
        for x in q:
            idx = forest.vertex_to_tree.get(x)
            if idx is not None and idx != spine.tree.index and not (tau >> idx) & 1:
                return False
        shape = shape_predicates(q, spine)
        return shape.plain and shape.quasi_monotone

    def weighted(paths: Sequence[Path]) -> List[Tuple[int, Path]]:
        return sorted((path_weight(inst, q), q) for q in paths)

    best: Optional[int] = None
    starts = {(spine.a1, spine.a2), (spine.a2, spine.a1)}
    for h1, h2 in sorted(starts):
        first = weighted([q for q in _simple_paths(inst.graph, h1, u)
                          if len(q) >= len(tail) and q[-len(tail):] == tail and usable(q)])
        second = weighted([q for q in _simple_paths(inst.graph, h2, v)
                           if not (set(q) & beyond) - {v} and usable(q)])
        if not second:
            continue
        for w1, q1 in first:
            if best is not None and w1 + second[0][0] >= best:
                break
            for w2, q2 in second:
                if best is not None and w1 + w2 >= best:
                    break
                if is_partial_solution(q1, q2, u, v, tau, spine, forest):
                    best = w1 + w2
    return best


def generate_instance(n: int, c: int, density: float = Config.DEFAULT_DENSITY,
                      weight_range: Tuple[int, int] = (1, 4), seed: int = Config.DEFAULT_SEED
                      ) -> WeightedInstance:
    """Seeded random conservative instance with c vertex-disjoint negative trees.

    Positive weights are drawn from [M, 2M], M being the largest absolute
    total weight of a tree, so every cycle has non-negative weight.
    """
    if n < 4:
        raise ParamsInfeasible(f"need n >= 4, got {n}")
    if c < 0 or 2 * c > n:
        raise ParamsInfeasible(f"cannot place {c} disjoint trees with an edge each on {n} vertices")
    low, high = weight_range
    if not 1 <= low <= high:
        raise ParamsInfeasible(f"weight range {weight_range} must satisfy 1 <= low <= high")

    for attempt in range(16):
        rng = random.Random(f"{seed}:{n}:{c}:{density}:{attempt}")
        order = list(range(n))
        rng.shuffle(order)
        groups = [order[2 * k:2 * k + 2] for k in range(c)]
        for x in order[2 * c:]:
            if groups and rng.random() < 0.5:
                rng.choice(groups).append(x)

        edges: Dict[Tuple[int, int], int] = {}
        margin = 0
        for group in groups:
            total = 0
            for k in range(1, len(group)):
                w = -rng.randint(low, high)
                a, b = sorted((group[k], rng.choice(group[:k])))
                edges[(a, b)] = w
                total += w
            margin = max(margin, -total)

        lo, hi = (margin, 2 * margin) if margin else (low, high)
        for a in range(n):
            for b in range(a + 1, n):
                if (a, b) not in edges and rng.random() < density:
                    edges[(a, b)] = rng.randint(lo, hi)

        s, t = rng.sample(range(n), 2)
        inst = build_instance(n, [[a, b, w] for (a, b), w in sorted(edges.items())], s, t)
        cert = is_conservative(inst)
        if cert.ok:
            logger.debug(f"Generated n={n}, c={c}, seed={seed}: m={inst.m}, margin={margin}")
            return inst
        logger.warning(f"Generated instance has negative cycle {cert.cycle}; retrying")
    raise ParamsInfeasible(f"no conservative instance for n={n}, c={c}, seed={seed}")
