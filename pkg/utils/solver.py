#!/usr/bin/env python3
"""
Solver Module
Top-level recursion for Shortest Two Disjoint Paths with conservative
weights: separable solutions by flow, then per negative tree either a
recursion on gadget sub-instances or four-terminal guesses stitched with the
permissively disjoint path pair of the spine dynamic program.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from utils import invariants
from utils.errors import (
    EmptyIntersection, InstanceError, NonConservativeInput, PreconditionViolated,
)
from utils.flows import build_Naabb, build_Nz, decompose_flow, min_cost_flow, Flow
from utils.graph_core import (
    Edge, NegTree, NegativeForest, Path, PathPair, SCALE, WeightedInstance,
    is_conservative, negative_forest, norm_edge, path_weight, restrict, solution_is_valid,
)
from utils.partsol import AuxiliaryRoutes, perm_disjoint
from utils.treekit import amend, build_spine, find_shortcuts, tree_path, tree_path_weight
from utils.uncross import combine

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Solution:
    """Two openly disjoint s-t paths with their exact scaled weight"""
    P1: Path
    P2: Path
    weight: int

    @property
    def unscaled(self) -> Fraction:
        return Fraction(self.weight, SCALE)

    @property
    def pair(self) -> PathPair:
        return PathPair(self.P1, self.P2, self.weight, 'open')


def _solution(inst: WeightedInstance, p1: Sequence[int], p2: Sequence[int]) -> Solution:
    first, second = sorted((tuple(p1), tuple(p2)))
    return Solution(first, second, path_weight(inst, first) + path_weight(inst, second))


@dataclass
class SolveStats:
    separable_flows: int = 0
    partitions_visited: int = 0
    partitions_skipped: int = 0
    guesses_tried: int = 0
    sub_instance_solves: int = 0
    rejected_candidates: int = 0
    max_depth: int = 0
    best_branch: str = ''

    def as_dict(self) -> Dict[str, object]:
        return dict(self.__dict__)


@dataclass(frozen=True)
class SubInstance:
    """A gadget sub-instance: base graph minus deletions plus a new terminal joined to two anchors"""
    instance: WeightedInstance
    gadget: int
    gadget_weight: int
    anchors: Tuple[int, int]
    removed_vertices: FrozenSet[int]
    removed_edges: FrozenSet[Edge]

    @property
    def terminals(self) -> Tuple[int, int]:
        return self.instance.s, self.instance.t


# Step 3 guesses

def reasonable_guess(T: NegTree, a1: int, a2: int, b1: int, b2: int, s: int, t: int) -> bool:
    if s in T.vertices:
        if not s == a1 == a2:
            return False
    elif a1 == a2:
        return False
    if t in T.vertices:
        if not t == b1 == b2:
            return False
    elif b1 == b2:
        return False
    first = tree_path(T, a1, b1)
    shared = {norm_edge(x, y) for x, y in zip(first, first[1:])}
    second = tree_path(T, a2, b2)
    return any(norm_edge(x, y) in shared for x, y in zip(second, second[1:]))


# Separable solutions

def _selections(forest: NegativeForest, s: int, t: int) -> Iterator[Dict[int, int]]:
    free = [T for T in forest.trees if s not in T.vertices and t not in T.vertices]
    for choice in itertools.product(*(sorted(T.vertices) for T in free)):
        yield {T.index: z for T, z in zip(free, choice)}


def solve_separable(inst: WeightedInstance, stats: Optional[SolveStats] = None) -> Optional[Solution]:
    """Cheapest solution found by the flow networks N_Z over G and G minus one negative edge"""
    stats = stats if stats is not None else SolveStats()
    s, t = inst.s, inst.t
    best: Optional[Solution] = None
    variants: List[Tuple[Optional[Edge], WeightedInstance]] = [(None, inst)]
    variants += [(e, restrict(inst, removed_edges=[e])) for e in inst.negative_edges()]

    for dropped, graph in variants:
        forest = negative_forest(graph)
        both = any(s in T.vertices and t in T.vertices for T in forest.trees)
        for Z in _selections(forest, s, t):
            for toward_t in ((False, True) if both else (False,)):
                net = build_Nz(graph, Z, forest, toward_t=toward_t)
                flow = min_cost_flow(net, 2)
                stats.separable_flows += 1
                if flow is None:
                    continue
                paths = decompose_flow(net, flow)
                if not solution_is_valid(inst, *paths):
                    logger.debug(f"Separable flow for Z={Z} (dropped {dropped}) is not a solution")
                    continue
                candidate = _solution(inst, *paths)
                if best is None or candidate.weight < best.weight:
                    best = candidate
                    logger.debug(f"Separable candidate {candidate.weight} from Z={Z}, dropped={dropped}")
    return best


# Sub-instances

def _gadget_weight(T: NegTree, x: int, y: int) -> int:
    span = abs(tree_path_weight(T, x, y))
    if span % 2:
        raise InstanceError(f"tree path {x}-{y} has odd scaled weight {span}")
    return span // 2


def _sub_instance(inst: WeightedInstance, removed_vertices: Iterable[int], removed_edges: Iterable[Edge],
                  anchors: Tuple[int, int], weight: int, s: int, t: int) -> SubInstance:
    gadget = inst.n
    gone = frozenset(removed_vertices)
    dropped = frozenset(norm_edge(*e) for e in removed_edges)
    added = {norm_edge(gadget, anchors[0]): weight, norm_edge(gadget, anchors[1]): weight}
    sub = restrict(inst, gone, dropped, added, n=inst.n + 1, s=s, t=t)
    if invariants.enabled():
        cert = is_conservative(sub)
        invariants.check(cert.ok, f"sub-instance with gadget at {anchors} has negative cycle {cert.cycle}")
    return SubInstance(sub, gadget, weight, anchors, gone, dropped)


def _check_anchors(T: NegTree, groups: Iterable[int], x: int, y: int) -> FrozenSet[int]:
    chosen = frozenset(groups)
    if not chosen or T.index in chosen:
        raise ValueError(f"tree family {sorted(chosen)} must be non-empty and exclude tree {T.index}")
    if x == y or x not in T.vertices or y not in T.vertices:
        raise ValueError(f"anchors {x}, {y} must be distinct vertices of tree {T.index}")
    return chosen


def build_sub_instances_s(inst: WeightedInstance, Ts: Iterable[int], a1: int, a2: int, T: NegTree,
                          forest: Optional[NegativeForest] = None) -> Tuple[SubInstance, SubInstance]:
    """Sub-instances for a non-empty family of trees met before T.

    The first keeps only the trees of Ts and runs from s to the gadget vertex,
    the second drops the vertices of Ts and runs from the gadget vertex to t.
    """
    forest = forest or negative_forest(inst)
    Ts = _check_anchors(T, Ts, a1, a2)
    weight = _gadget_weight(T, a1, a2)
    rest = [U for U in forest.trees if U.index not in Ts]
    rest_edges = [e for U in rest for e in U.edges]
    rest_vertices = {v for U in rest for v in U.vertices} - {a1, a2}
    first = _sub_instance(inst, rest_vertices, rest_edges, (a1, a2), weight, inst.s, inst.n)
    ts_vertices = {v for idx in Ts for v in forest.trees[idx].vertices}
    second = _sub_instance(inst, ts_vertices, (), (a1, a2), weight, inst.n, inst.t)
    return first, second


def build_sub_instances_t(inst: WeightedInstance, Tt: Iterable[int], b1: int, b2: int, T: NegTree,
                          forest: Optional[NegativeForest] = None) -> Tuple[SubInstance, SubInstance]:
    """Mirror of build_sub_instances_s for a family of trees met after T"""
    forest = forest or negative_forest(inst)
    Tt = _check_anchors(T, Tt, b1, b2)
    weight = _gadget_weight(T, b1, b2)
    tt_vertices = {v for idx in Tt for v in forest.trees[idx].vertices}
    first = _sub_instance(inst, tt_vertices, (), (b1, b2), weight, inst.s, inst.n)
    rest = [U for U in forest.trees if U.index not in Tt]
    rest_edges = [e for U in rest for e in U.edges]
    rest_vertices = {v for U in rest for v in U.vertices} - {b1, b2}
    second = _sub_instance(inst, rest_vertices, rest_edges, (b1, b2), weight, inst.n, inst.t)
    return first, second


# Recursion

class _Search:
    """One solve call: the global best cell plus counters"""

    def __init__(self, root: WeightedInstance, stats: SolveStats):
        self.root = root
        self.stats = stats
        self.depth_limit = negative_forest(root).c

    def run(self, inst: WeightedInstance, depth: int) -> Optional[Solution]:
        stats = self.stats
        stats.max_depth = max(stats.max_depth, depth)
        invariants.check(depth <= self.depth_limit, f"recursion depth {depth} exceeds c={self.depth_limit}")
        forest = negative_forest(inst)
        best = solve_separable(inst, stats)
        label = 'separable' if best is not None else ''

        for T in forest.trees:
            others = [U.index for U in forest.trees if U.index != T.index]
            seen = set()
            for code in itertools.product('s0t', repeat=len(others)):
                Ts = frozenset(idx for idx, part in zip(others, code) if part == 's')
                Tt = frozenset(idx for idx, part in zip(others, code) if part == 't')
                if not self._admissible(inst, forest, T, Ts, Tt):
                    stats.partitions_skipped += 1
                    continue
                key = ('s', Ts) if Ts else ('t', Tt) if Tt else ('0', frozenset())
                if key in seen:
                    continue
                seen.add(key)
                stats.partitions_visited += 1
                logger.debug(f"Depth {depth}: tree {T.index}, partition {''.join(code) or '-'}")

                if Ts:
                    candidate = self._branch_s(inst, forest, T, Ts, depth)
                elif Tt:
                    candidate = self._branch_t(inst, forest, T, Tt, depth)
                else:
                    candidate = self._branch_guesses(inst, forest, T)
                if candidate is not None and (best is None or candidate.weight < best.weight):
                    best = candidate
                    label = f"tree {T.index} {key[0]}:{sorted(key[1])}"

        if depth == 0:
            stats.best_branch = label
        return best

    @staticmethod
    def _admissible(inst: WeightedInstance, forest: NegativeForest, T: NegTree,
                    Ts: FrozenSet[int], Tt: FrozenSet[int]) -> bool:
        for terminal, family in ((inst.s, Ts), (inst.t, Tt)):
            idx = forest.vertex_to_tree.get(terminal)
            if idx is None:
                continue
            if idx == T.index and family:
                return False
            if idx != T.index and idx not in family:
                return False
        return True

    def _keep(self, inst: WeightedInstance, p1: Path, p2: Path, where: str) -> Optional[Solution]:
        if solution_is_valid(inst, p1, p2):
            return _solution(inst, p1, p2)
        self.stats.rejected_candidates += 1
        logger.warning(f"Discarded stitched candidate from {where}: {p1} / {p2}")
        return None

    @staticmethod
    def _anchors(inst: WeightedInstance, T: NegTree) -> List[int]:
        """Vertices of T that a path can enter from outside T"""
        return [x for x in sorted(T.vertices) if any(y not in T.vertices for y in inst.neighbors(x))]

    def _branch_s(self, inst: WeightedInstance, forest: NegativeForest, T: NegTree,
                  Ts: FrozenSet[int], depth: int) -> Optional[Solution]:
        best = None
        for a1, a2 in itertools.combinations(self._anchors(inst, T), 2):
            sub1, sub2 = build_sub_instances_s(inst, Ts, a1, a2, T, forest)
            before = self.run(sub1.instance, depth + 1)
            self.stats.sub_instance_solves += 1
            if before is None:
                continue
            after = self.run(sub2.instance, depth + 1)
            self.stats.sub_instance_solves += 1
            if after is None:
                continue
            p_pair = [p[:-1] for p in (before.P1, before.P2)]
            q_pair = [q[1:] for q in (after.P1, after.P2)]
            candidate = self._stitch(inst, forest, T, Ts, p_pair, q_pair,
                                     before.weight + after.weight - 4 * sub1.gadget_weight,
                                     reverse=False, where=f"s-branch {a1},{a2}")
            if candidate is not None and (best is None or candidate.weight < best.weight):
                best = candidate
        return best

    def _branch_t(self, inst: WeightedInstance, forest: NegativeForest, T: NegTree,
                  Tt: FrozenSet[int], depth: int) -> Optional[Solution]:
        best = None
        for b1, b2 in itertools.combinations(self._anchors(inst, T), 2):
            sub1, sub2 = build_sub_instances_t(inst, Tt, b1, b2, T, forest)
            before = self.run(sub1.instance, depth + 1)
            self.stats.sub_instance_solves += 1
            if before is None:
                continue
            after = self.run(sub2.instance, depth + 1)
            self.stats.sub_instance_solves += 1
            if after is None:
                continue
            # the P side starts at t: paths t..b_i, the Q side ends at s
            p_pair = [q[1:][::-1] for q in (after.P1, after.P2)]
            q_pair = [p[:-1] for p in (before.P1, before.P2)]
            candidate = self._stitch(inst, forest, T, Tt, p_pair, q_pair,
                                     before.weight + after.weight - 4 * sub1.gadget_weight,
                                     reverse=True, where=f"t-branch {b1},{b2}")
            if candidate is not None and (best is None or candidate.weight < best.weight):
                best = candidate
        return best

    def _stitch(self, inst: WeightedInstance, forest: NegativeForest, T: NegTree, family: FrozenSet[int],
                p_pair: List[Path], q_pair: List[Path], bound: int, reverse: bool,
                where: str) -> Optional[Solution]:
        p_pair = list(amend(p_pair[0], p_pair[1], forest, inst))
        q_pair = list(amend(q_pair[0], q_pair[1], forest, inst))
        try:
            result = combine(p_pair, q_pair, T, family, forest, inst)
        except PreconditionViolated as e:
            self.stats.rejected_candidates += 1
            logger.warning(f"Combine rejected {where}: {e}")
            return None
        s1, s2 = result.pair
        if reverse:
            s1, s2 = s1[::-1], s2[::-1]
        candidate = self._keep(inst, s1, s2, where)
        if candidate is not None:
            invariants.check(candidate.weight <= bound,
                             f"{where}: stitched weight {candidate.weight} exceeds {bound}")
        return candidate

    # Step 3

    def _branch_guesses(self, inst: WeightedInstance, forest: NegativeForest, T: NegTree) -> Optional[Solution]:
        s, t = inst.s, inst.t
        tree_vertices = forest.vertices()

        def can_enter(x: int, terminal: int) -> bool:
            return x == terminal or any(y not in tree_vertices for y in inst.neighbors(x))

        a_side = [x for x in sorted(T.vertices) if can_enter(x, s)]
        b_side = [x for x in sorted(T.vertices) if can_enter(x, t)]
        flows: Dict[Tuple[int, ...], Optional[Tuple[object, Optional[Flow]]]] = {}
        pairs: Dict[FrozenSet, Optional[PathPair]] = {}
        routes = AuxiliaryRoutes(inst)
        best = None
        for a1, b1, a2, b2 in itertools.product(a_side, b_side, a_side, b_side):
            if {a1, a2} & {b1, b2}:
                continue
            if not reasonable_guess(T, a1, a2, b1, b2, s, t):
                continue
            spine = build_spine(T, a1, a2, b1, b2)
            ends = frozenset((frozenset((spine.a1, spine.a2)), frozenset((spine.b1, spine.b2))))
            if ends in pairs:
                continue
            self.stats.guesses_tried += 1

            terminals = tuple(sorted((a1, a2, b1, b2)))
            if terminals not in flows:
                net = build_Naabb(inst, a1, b1, a2, b2, forest)
                flows[terminals] = (net, min_cost_flow(net, 4))
            net, flow = flows[terminals]
            if flow is None:
                pairs[ends] = None
                continue
            try:
                pairs[ends] = perm_disjoint(inst, T, spine.a1, spine.a2, spine.b1, spine.b2, forest,
                                            routes=routes)
            except EmptyIntersection:
                pairs[ends] = None
            q = pairs[ends]
            if q is None:
                continue
            candidate = self._stitch_guess(inst, forest, T, spine, net, flow, q)
            if candidate is not None:
                invariants.check(candidate.weight <= flow.cost + q.weight,
                                 f"guess {spine.a1},{spine.b1},{spine.a2},{spine.b2}: stitched weight "
                                 f"{candidate.weight} exceeds {flow.cost + q.weight}")
                if best is None or candidate.weight < best.weight:
                    best = candidate
        return best

    def _stitch_guess(self, inst: WeightedInstance, forest: NegativeForest, T: NegTree, spine,
                      net, flow: Flow, q: PathPair) -> Optional[Solution]:
        s, t = inst.s, inst.t
        where = f"guess {spine.a1},{spine.b1},{spine.a2},{spine.b2}"
        paths = _untangle(decompose_flow(net, flow), s, t)
        if paths is None:
            self.stats.rejected_candidates += 1
            logger.warning(f"Flow paths for {where} do not split into s- and t-paths")
            return None
        a_set = {spine.a1, spine.a2}
        from_s = [p for p in paths if p[0] == s]
        from_t = [p for p in paths if p[0] == t]
        s_sides = sorted('a' if p[-1] in a_set else 'b' for p in from_s)
        t_sides = sorted('a' if p[-1] in a_set else 'b' for p in from_t)

        if s_sides == ['a', 'b'] and t_sides == ['a', 'b']:
            s_a, s_b = sorted(from_s, key=lambda p: p[-1] not in a_set)
            t_a, t_b = sorted(from_t, key=lambda p: p[-1] not in a_set)
            s1 = s_a + tree_path(T, s_a[-1], t_a[-1])[1:] + t_a[::-1][1:]
            s2 = s_b + tree_path(T, s_b[-1], t_b[-1])[1:] + t_b[::-1][1:]
            return self._keep(inst, s1, s2, where)

        if s_sides == ['a', 'a'] and t_sides == ['b', 'b']:
            near, far = from_s, from_t
        elif s_sides == ['b', 'b'] and t_sides == ['a', 'a']:
            near, far = from_t, from_s
        else:
            self.stats.rejected_candidates += 1
            logger.warning(f"Flow endpoints for {where} fit neither stitching case")
            return None

        no_trees: FrozenSet[int] = frozenset()
        try:
            if all(len(p) == 1 for p in near):
                joined = (q.first, q.second)
            else:
                joined = combine(near, (q.first, q.second), T, no_trees, forest, inst).pair
            joined = amend(joined[0], joined[1], forest, inst)
            if all(len(p) == 1 for p in far):
                s1, s2 = joined
            else:
                s1, s2 = combine(far, joined, T, no_trees, forest, inst).pair
        except PreconditionViolated as e:
            self.stats.rejected_candidates += 1
            logger.warning(f"Combine rejected {where}: {e}")
            return None
        s1, s2 = (p if p[0] == s else p[::-1] for p in (s1, s2))
        return self._keep(inst, s1, s2, where)


def _untangle(paths: List[Path], s: int, t: int) -> Optional[List[Path]]:
    """Cut flow paths that run through the other terminal into two pieces"""
    out = list(paths)
    for p in list(out):
        other = t if p[0] == s else s
        if other in p[1:-1]:
            k = p.index(other)
            if (other,) not in out:
                return None
            out.remove(p)
            out.remove((other,))
            out += [p[:k + 1], p[k:]]
    if sorted(p[0] for p in out) != sorted((s, s, t, t)):
        return None
    return out


def solve_with_stats(inst: WeightedInstance) -> Tuple[Optional[Solution], SolveStats]:
    """Minimum-weight pair of openly disjoint s-t paths together with search counters"""
    cert = is_conservative(inst)
    if not cert.ok:
        raise NonConservativeInput(cert.cycle, cert.weight)
    stats = SolveStats()
    search = _Search(inst, stats)
    best = search.run(inst, 0)
    if best is not None:
        forest = negative_forest(inst)
        invariants.check(solution_is_valid(inst, best.P1, best.P2), f"solution {best} is not valid")
        invariants.check(not find_shortcuts(best.P1, best.P2, forest),
                         f"solution {best} is not locally cheapest")
        logger.info(f"Solved {inst}: weight {best.unscaled} via {stats.best_branch}")
    else:
        logger.info(f"Solved {inst}: infeasible")
    return best, stats


def solve(inst: WeightedInstance) -> Optional[Solution]:
    return solve_with_stats(inst)[0]
