#!/usr/bin/env python3
"""
Test script for the uncrossing step that stitches two path pairs meeting on
a negative tree.
"""

import os
import random
import sys
from collections import Counter

sys.path.append(os.path.dirname(os.path.dirname(__file__)))

import networkx as nx
import pytest

from tests.fixtures import UNCROSS_QUADRUPLES, tight_instance
from utils import invariants
from utils.errors import PreconditionViolated
from utils.graph_core import build_instance, negative_forest, path_edges, path_weight, permissively_disjoint
from utils.oracle import generate_instance
from utils.treekit import amend
from utils.uncross import combine

NO_TREES = frozenset()


def _total(inst, *paths):
    return sum(path_weight(inst, p) for p in paths)


def test_straight_stitch():
    """Q meets P only at v1 and v2"""
    inst = build_instance(6, [[0, 2, 1], [1, 3, 1], [2, 4, 1], [3, 5, 1], [2, 3, -1]], 0, 5)
    forest = negative_forest(inst)
    T = forest.trees[0]
    P, Q = [(0, 2), (1, 3)], [(2, 4), (3, 5)]
    with invariants.assertions():
        result = combine(P, Q, T, NO_TREES, forest, inst)
    assert result.case == 'A'
    assert result.pair == ((0, 2, 4), (1, 3, 5))
    assert _total(inst, *result.pair) == _total(inst, *P, *Q)

    # Q given end-first is oriented before use
    assert combine(P, [(4, 2), (5, 3)], T, NO_TREES, forest).pair == result.pair
    print("[OK] Case A")


def test_crossed_stitch():
    """P1 first meets Q2 and P2 first meets Q1"""
    inst = build_instance(6, [[0, 5, 1], [5, 2, 1], [1, 4, 1], [4, 3, 1],
                              [2, 4, 1], [3, 5, 1], [2, 3, -1]], 0, 1)
    forest = negative_forest(inst)
    T = forest.trees[0]
    P, Q = [(0, 5, 2), (1, 4, 3)], [(2, 4), (3, 5)]
    with invariants.assertions():
        result = combine(P, Q, T, NO_TREES, forest, inst)
    assert result.case == 'B'
    assert result.pair == ((0, 5), (1, 4))
    assert permissively_disjoint(*result.pair)
    assert _total(inst, *result.pair) <= _total(inst, *P, *Q)
    print("[OK] Case B")


def test_connector_stitch():
    """Both P paths first meet Q1; the result runs through the tree path 2-6-3"""
    inst = build_instance(9, [[2, 6, -1], [6, 3, -1],
                              [0, 4, 1], [4, 2, 1], [1, 7, 1], [7, 8, 1], [8, 3, 1], [4, 7, 1], [3, 5, 1]], 0, 1)
    forest = negative_forest(inst)
    T = forest.trees[0]
    P, Q = [(0, 4, 2), (1, 7, 8, 3)], [(2, 4, 7), (3, 5)]
    with invariants.assertions():
        result = combine(P, Q, T, NO_TREES, forest, inst)
    assert result.case == 'C1'
    assert result.pair == ((0, 4, 2, 6, 3, 5), (1, 7))
    assert _total(inst, *result.pair) == 4
    assert _total(inst, *result.pair) < _total(inst, *P, *Q)

    # same stitch with the roles swapped: now P2 reaches Q first
    with invariants.assertions():
        mirrored = combine([P[1], P[0]], [Q[1], Q[0]], T, NO_TREES, forest, inst)
    assert mirrored.case == 'C1'
    assert mirrored.pair == ((1, 7), (0, 4, 2, 6, 3, 5))
    print("[OK] Case C through a tree connector")


def test_connector_past_the_meeting_point():
    """P1 meets Q1 at v1 itself and Q1 leaves along the tree edge 2-6, so the exit vertex lies after y1"""
    inst = build_instance(8, [[2, 6, -1], [6, 3, -1],
                              [0, 2, 1], [1, 7, 1], [7, 3, 1], [6, 7, 1], [3, 5, 1]], 0, 1)
    forest = negative_forest(inst)
    T = forest.trees[0]
    P, Q = [(0, 2), (1, 7, 3)], [(2, 6, 7), (3, 5)]
    with invariants.assertions():
        result = combine(P, Q, T, NO_TREES, forest, inst)
    assert result.case == 'C2'
    assert result.pair == ((0, 2, 6, 3, 5), (1, 7))
    assert _total(inst, *result.pair) == 2
    assert _total(inst, *result.pair) < _total(inst, *P, *Q) == 8
    print("[OK] Case C with the exit vertex beyond the meeting point")


def _random_path(rng, graph, source, target):
    if source not in graph or target not in graph:
        return None
    paths = list(nx.all_simple_paths(graph, source, target, cutoff=4))
    return tuple(rng.choice(paths)) if paths else None


def _random_quadruple(rng, inst, forest):
    """P and Q pairs around two vertices of one tree, or None when a draw breaks the rules"""
    T = rng.choice(forest.trees)
    v1, v2 = rng.sample(sorted(T.vertices), 2)
    others = frozenset(U.index for U in forest.trees if U.index != T.index)
    first = others if rng.random() < 0.5 else frozenset()
    outside = [x for x in inst.vertices if x not in T.vertices]
    ends = [x for x in inst.vertices if x not in (v1, v2)]
    if not outside:
        return None

    p_side, q_side = nx.Graph(), nx.Graph()
    for e in inst.weights:
        idx = forest.edge_to_tree.get(e)
        if (idx is None or idx in first) and not (set(e) & T.vertices) - {v1, v2}:
            p_side.add_edge(*e)
        if idx is None or idx not in first:
            q_side.add_edge(*e)

    p1 = _random_path(rng, p_side, rng.choice(outside), v1)
    p2 = _random_path(rng, p_side, rng.choice(outside), v2)
    q1 = _random_path(rng, q_side, v1, rng.choice(ends))
    q2 = _random_path(rng, q_side, v2, rng.choice(ends))
    if None in (p1, p2, q1, q2):
        return None
    if not permissively_disjoint(p1, p2) or not permissively_disjoint(q1, q2):
        return None
    q1, q2 = amend(q1, q2, forest)
    if any(forest.edge_to_tree.get(e) in first for q in (q1, q2) for e in path_edges(q)):
        return None
    return (p1, p2), (q1, q2), T, first


def test_random_quadruples():
    rng = random.Random(5)
    cases = Counter()
    draws = 0
    while sum(cases.values()) < UNCROSS_QUADRUPLES and draws < 200 * UNCROSS_QUADRUPLES:
        draws += 1
        n = rng.randint(6, 9)
        make = tight_instance if draws % 2 else generate_instance
        inst = make(n, rng.choice([c for c in (1, 2, 3) if 2 * c <= n]), density=0.5, seed=draws)
        forest = negative_forest(inst)
        drawn = _random_quadruple(rng, inst, forest)
        if drawn is None:
            continue
        P, Q, T, first = drawn
        with invariants.assertions():
            result = combine(P, Q, T, first, forest, inst)
        s1, s2 = result.pair
        assert permissively_disjoint(s1, s2), (inst.edges, P, Q)
        assert {s1[0], s2[0]} == {P[0][0], P[1][0]} and {s1[-1], s2[-1]} == {Q[0][-1], Q[1][-1]}
        before, after = _total(inst, *P, *Q), _total(inst, s1, s2)
        assert after < before if result.case.startswith('C') else after <= before, (inst.edges, P, Q)
        cases[result.case] += 1
    assert sum(cases.values()) >= UNCROSS_QUADRUPLES
    print(f"[OK] {sum(cases.values())} random quadruples stitched: {dict(sorted(cases.items()))}")


def test_preconditions():
    inst = build_instance(6, [[0, 2, 1], [1, 3, 1], [2, 4, 1], [3, 5, 1], [2, 3, -1]], 0, 5)
    forest = negative_forest(inst)
    T = forest.trees[0]

    with pytest.raises(PreconditionViolated):
        combine([(0, 2), (1, 2)], [(2, 4), (3, 5)], T, NO_TREES, forest)
    with pytest.raises(PreconditionViolated) as info:
        combine([(0, 2), (1, 3)], [(2, 4), (4, 2)], T, NO_TREES, forest)
    assert info.value.condition == 'Q starts at v1 and v2'

    # P may touch the tree only at its last vertex
    inst = build_instance(9, [[2, 6, -1], [6, 3, -1], [0, 6, 1], [1, 3, 1], [2, 4, 1], [3, 5, 1]], 0, 1)
    forest = negative_forest(inst)
    with pytest.raises(PreconditionViolated) as info:
        combine([(0, 6, 2), (1, 3)], [(2, 4), (3, 5)], forest.trees[0], NO_TREES, forest)
    assert info.value.witness == 6
    print("[OK] Precondition violations are reported")


if __name__ == "__main__":
    print("Testing Uncrossing...")
    test_straight_stitch()
    test_crossed_stitch()
    test_connector_stitch()
    test_connector_past_the_meeting_point()
    test_random_quadruples()
    test_preconditions()
    print("\n[SUCCESS] Uncrossing tests completed!")
