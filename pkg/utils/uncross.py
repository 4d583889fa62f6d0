#!/usr/bin/env python3
"""
Uncrossing Module
Merges a pair of paths ending on a negative tree with a locally cheapest pair
starting there, without increasing the total weight.
"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, Optional, Sequence, Tuple

from utils import invariants
from utils.errors import PreconditionViolated
from utils.graph_core import (
    NegTree, NegativeForest, Path, WeightedInstance, concat, path_edges, path_weight,
    permissively_disjoint, subpath,
)
from utils.treekit import find_shortcuts, tree_path

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CombineResult:
    first: Path
    second: Path
    case: str

    @property
    def pair(self) -> Tuple[Path, Path]:
        return self.first, self.second


def _orient_q(q_pair: Sequence[Sequence[int]], v1: int, v2: int) -> Tuple[Path, Path]:
    oriented = {}
    for q in q_pair:
        q = tuple(q)
        if q[0] in (v1, v2) and q[0] not in oriented:
            oriented[q[0]] = q
        elif q[-1] in (v1, v2) and q[-1] not in oriented:
            oriented[q[-1]] = q[::-1]
        else:
            raise PreconditionViolated('Q starts at v1 and v2', q)
    return oriented[v1], oriented[v2]


def _check_preconditions(p1: Path, p2: Path, q1: Path, q2: Path, T: NegTree,
                         first_trees: FrozenSet[int], forest: NegativeForest) -> None:
    stray = (set(p1) | set(p2)) & T.vertices - {p1[-1], p2[-1]}
    if stray:
        raise PreconditionViolated('(i) P meets T only at v1, v2', min(stray))
    for p in (p1, p2):
        for e in path_edges(p):
            idx = forest.edge_to_tree.get(e)
            if idx is not None and idx not in first_trees:
                raise PreconditionViolated('(ii) P avoids edges of the second tree family', e)
    for q in (q1, q2):
        for e in path_edges(q):
            idx = forest.edge_to_tree.get(e)
            if idx is not None and idx in first_trees:
                raise PreconditionViolated('(ii) Q avoids edges of the first tree family', e)
    shortcuts = find_shortcuts(q1, q2, forest)
    if shortcuts:
        raise PreconditionViolated('Q locally cheapest', (shortcuts[0].z, shortcuts[0].z_prime))


def _first_meeting(p: Path, on_q: set) -> int:
    for x in p:
        if x in on_q:
            return x
    raise PreconditionViolated('P reaches Q', p[-1])


def combine(p_pair: Sequence[Sequence[int]], q_pair: Sequence[Sequence[int]], T: NegTree,
            first_trees: FrozenSet[int], forest: NegativeForest,
            inst: Optional[WeightedInstance] = None) -> CombineResult:
    """Stitch ({p1,p2},{v1,v2})-paths with ({v1,v2},{q1,q2})-paths.

    P_i runs from p_i to v_i; the Q paths may be given in either direction.
    first_trees holds the indices of the tree family the P side may use (T is
    never in it).
    """
    p1, p2 = tuple(p_pair[0]), tuple(p_pair[1])
    v1, v2 = p1[-1], p2[-1]
    if v1 == v2:
        raise PreconditionViolated('v1 != v2', v1)
    q1, q2 = _orient_q(q_pair, v1, v2)
    _check_preconditions(p1, p2, q1, q2, T, first_trees, forest)

    on1, on2 = set(q1), set(q2)
    y1 = _first_meeting(p1, on1 | on2)
    y2 = _first_meeting(p2, on1 | on2)

    if y1 in on1 and y2 in on2:
        case = 'A'
        s1 = concat(subpath(p1, p1[0], y1), subpath(q1, y1, q1[-1]))
        s2 = concat(subpath(p2, p2[0], y2), subpath(q2, y2, q2[-1]))
    elif y1 in on2 and y2 in on1:
        case = 'B'
        s1 = concat(subpath(p1, p1[0], y1), subpath(q2, y1, q2[-1]))
        s2 = concat(subpath(p2, p2[0], y2), subpath(q1, y2, q1[-1]))
    else:
        qk, qo = (q1, q2) if (y1 in on1 and y2 in on1) else (q2, q1)
        on_k, on_o = set(qk), set(qo)
        ps = {1: p1, 2: p2}
        ys = {1: y1, 2: y2}
        alpha = 1 if qk.index(y1) <= qk.index(y2) else 2
        beta = 3 - alpha
        start = qk.index(ys[alpha])

        # walk back along Q_k to the tree, then inside T toward the other Q path
        entry = next(i for i in range(start, -1, -1) if qk[i] in T.vertices)
        walk = list(qk[entry:start + 1][::-1]) + list(tree_path(T, qk[entry], qo[0])[1:])
        u = u_prime = None
        for x in walk:
            if x in on_o:
                u_prime = x
                break
            if x in on_k:
                u = x
        if u is None or u_prime is None:
            raise PreconditionViolated('connector inside T', ys[alpha])
        case = 'C1' if qk.index(u) <= start else 'C2'
        s_alpha = concat(subpath(ps[alpha], ps[alpha][0], ys[alpha]), subpath(qk, ys[alpha], u),
                         tree_path(T, u, u_prime), subpath(qo, u_prime, qo[-1]))
        s_beta = concat(subpath(ps[beta], ps[beta][0], ys[beta]), subpath(qk, ys[beta], qk[-1]))
        s1, s2 = (s_alpha, s_beta) if alpha == 1 else (s_beta, s_alpha)

    if invariants.enabled():
        invariants.check(len(set(s1)) == len(s1) and len(set(s2)) == len(s2),
                         f"combine case {case} produced a non-simple path")
        invariants.check(permissively_disjoint(s1, s2),
                         f"combine case {case} produced paths that are not permissively disjoint")
        invariants.check({s1[0], s2[0]} == {p1[0], p2[0]} and {s1[-1], s2[-1]} == {q1[-1], q2[-1]},
                         f"combine case {case} changed the endpoints")
        if inst is not None:
            before = sum(path_weight(inst, p) for p in (p1, p2, q1, q2))
            after = path_weight(inst, s1) + path_weight(inst, s2)
            invariants.check(after < before if case.startswith('C') else after <= before,
                             f"combine case {case} went from weight {before} to {after}")
    logger.debug(f"Combine case {case}: y1={y1}, y2={y2}")
    return CombineResult(s1, s2, case)
