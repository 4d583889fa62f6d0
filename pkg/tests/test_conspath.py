#!/usr/bin/env python3
"""
Test script for conservative shortest paths.
"""

import os
import sys

sys.path.append(os.path.dirname(os.path.dirname(__file__)))

import networkx as nx
import pytest
from hypothesis import given

from tests.fixtures import PROPERTY_SETTINGS, i1, negative_triangle, small_instances
from utils.conspath import (
    JoinSolver, conservative_shortest_path, minimum_weight_join, nonneg_shortest_path,
)
from utils.errors import NegativeWeightSeen
from utils.graph_core import build_instance, path_weight, restrict


def test_conservative_shortest_path():
    inst = i1()
    assert conservative_shortest_path(inst.graph, 0, 3) == ((0, 1, 2, 3), 2)
    assert conservative_shortest_path(inst.graph, 0, 3, backend='search') == ((0, 1, 2, 3), 2)
    assert conservative_shortest_path(inst.graph, 1, 1) == ((1,), 0)

    path, weight = conservative_shortest_path(inst.graph, 0, 3, canonical=False)
    assert weight == 2
    assert path in ((0, 1, 2, 3), (0, 2, 1, 3))
    print("[OK] Shortest path through the negative edge")


def test_disconnected():
    inst = build_instance(5, [[0, 1, 1], [0, 2, 1], [1, 3, 1], [2, 3, 1], [1, 2, -1]], 0, 4)
    assert conservative_shortest_path(inst.graph, 0, 4) is None
    assert conservative_shortest_path(inst.graph, 0, 4, backend='search') is None
    assert conservative_shortest_path(inst.graph, 0, 9) is None
    print("[OK] Unreachable targets")


def test_minimum_weight_join():
    inst = i1()
    assert minimum_weight_join(inst.graph, ()) == set()
    ends = minimum_weight_join(inst.graph, (0, 3))
    assert sum(inst.weight(*e) for e in ends) == 2

    triangle = negative_triangle()
    join = minimum_weight_join(triangle.graph, ())
    assert sum(triangle.weight(*e) for e in join) == -6
    print("[OK] Minimum-weight joins")


def test_join_solver_reuse():
    inst = i1()
    solver = JoinSolver(inst.graph)
    assert solver.path(0, 3)[1] == 2
    assert solver.path(0, 2)[1] == 0
    assert solver.path(3, 3) == ((3,), 0)
    assert solver.path(0, 9) is None
    # distances under |w| are kept per source across queries
    reached = set(solver._absolute)
    solver.path(0, 3)
    assert set(solver._absolute) == reached
    assert solver.join((0, 3)) == minimum_weight_join(inst.graph, (0, 3))

    positive = restrict(i1(), removed_edges=[(1, 2)])
    plain = JoinSolver(positive.graph)
    assert not plain.negative
    assert plain.path(0, 3)[1] == 4
    assert set(plain._signed) == {0}
    print("[OK] Join solver answers repeated queries")


def test_nonneg_shortest_path():
    positive = restrict(i1(), removed_edges=[(1, 2)])
    assert nonneg_shortest_path(positive.graph, 0, 3) == ((0, 1, 3), 4)
    assert nonneg_shortest_path(positive.graph, 0, 1) == ((0, 1), 2)

    isolated = build_instance(3, [[0, 1, 1]], 0, 2)
    assert nonneg_shortest_path(isolated.graph, 0, 2) is None

    with pytest.raises(NegativeWeightSeen):
        nonneg_shortest_path(i1().graph, 0, 3)
    print("[OK] Dijkstra with lexicographic ties")


@PROPERTY_SETTINGS
@given(small_instances(n_max=7))
def test_matches_enumeration(inst):
    """Join-based distances agree with brute force over all simple paths"""
    s, t = inst.s, inst.t
    found = conservative_shortest_path(inst.graph, s, t)
    weights = [path_weight(inst, p) for p in nx.all_simple_paths(inst.graph, s, t)]
    if not weights:
        assert found is None
        return
    path, weight = found
    assert weight == min(weights)
    assert path_weight(inst, path) == weight
    assert conservative_shortest_path(inst.graph, s, t, backend='search')[1] == weight
    assert JoinSolver(inst.graph).path(s, t)[1] == weight


if __name__ == "__main__":
    print("Testing Conservative Shortest Paths...")
    test_conservative_shortest_path()
    test_disconnected()
    test_minimum_weight_join()
    test_join_solver_reuse()
    test_nonneg_shortest_path()
    test_matches_enumeration()
    print("\n[SUCCESS] Conservative shortest path tests completed!")
