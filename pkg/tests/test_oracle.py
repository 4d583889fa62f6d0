#!/usr/bin/env python3
"""
Test script for the exhaustive oracles and the seeded instance generator.
"""

import os
import sys
from unittest import mock

sys.path.append(os.path.dirname(os.path.dirname(__file__)))

import pytest
from hypothesis import given, strategies as st

from app.services.oracle_service import _compare_one
from tests.fixtures import PROPERTY_SETTINGS, bridge, i1, k4, small_instances
from utils.errors import ParamsInfeasible, TooLarge
from utils.graph_core import (
    build_instance, instance_to_json, is_conservative, negative_forest, openly_disjoint, relabel,
)
from utils.oracle import (
    brute_force_perm_disjoint, brute_force_stdp, generate_instance, paths_by_vertex_set,
)


def test_paths_by_vertex_set():
    table = paths_by_vertex_set(i1(), 0, 3)
    assert table[0b1011] == (4, (0, 1, 3))
    assert table[0b1101] == (4, (0, 2, 3))
    # both orders through the negative edge weigh 2; the smaller sequence wins
    assert table[0b1111] == (2, (0, 1, 2, 3))
    assert paths_by_vertex_set(i1(), 2, 2) == {0b100: (0, (2,))}
    print("[OK] Cheapest path per vertex set")


def test_brute_force_stdp():
    weight, pair = brute_force_stdp(i1())
    assert weight == 8
    assert (pair.first, pair.second) == ((0, 1, 3), (0, 2, 3))
    assert openly_disjoint(pair.first, pair.second, 0, 3)

    assert brute_force_stdp(k4())[0] == 6
    assert brute_force_stdp(k4(with_st=False))[0] == 8
    assert brute_force_stdp(bridge()) is None
    # one edge st cannot be used twice
    assert brute_force_stdp(build_instance(2, [[0, 1, 5]], 0, 1)) is None
    print("[OK] Exhaustive two-path search")


def test_size_guard():
    with pytest.raises(TooLarge) as info:
        brute_force_stdp(build_instance(13, [[0, 12, 1]], 0, 12))
    assert info.value.limit == 12
    print("[OK] Enumeration limit")


def test_compare_skips_before_solving():
    """Rows above the oracle limit are skipped without running the solver"""
    document = instance_to_json(build_instance(13, [[0, 12, 1]], 0, 12))
    with mock.patch('app.services.oracle_service.solve') as solve:
        row = _compare_one(('wide', document))
    assert row['status'] == 'skipped'
    assert not solve.called
    assert 'solver_seconds' not in row

    row = _compare_one(('i1', instance_to_json(i1())))
    assert row['status'] == 'agree' and row['solver_weight'] == row['oracle_weight'] == 8
    print("[OK] Oversized rows skip the solver")


def test_brute_force_perm_disjoint():
    weight, pair = brute_force_perm_disjoint(i1(), 0, 0, 3, 3)
    assert weight == 8
    assert {pair.first, pair.second} == {(0, 1, 3), (0, 2, 3)}

    # distinct ends: 0 -> 1 and 2 -> 3, or 0 -> 3 and 2 -> 1
    weight, pair = brute_force_perm_disjoint(i1(), 0, 2, 1, 3)
    assert weight == 4
    assert brute_force_perm_disjoint(bridge(), 0, 0, 2, 2) is None
    print("[OK] Permissively disjoint enumeration")


def test_generate_instance():
    inst = generate_instance(8, 1, seed=7)
    assert is_conservative(inst).ok
    assert negative_forest(inst).c == 1
    assert inst.s != inst.t

    assert generate_instance(8, 1, seed=7).key() == inst.key()
    assert generate_instance(8, 2, seed=3).key() == generate_instance(8, 2, seed=3).key()

    plain = generate_instance(6, 0, seed=1)
    assert not plain.negative_edges()

    for c in (2, 3):
        assert negative_forest(generate_instance(9, c, density=0.4, seed=11)).c == c
    print("[OK] Seeded generator")


def test_generator_parameters():
    with pytest.raises(ParamsInfeasible):
        generate_instance(4, 3)
    with pytest.raises(ParamsInfeasible):
        generate_instance(3, 0)
    with pytest.raises(ParamsInfeasible):
        generate_instance(6, 1, weight_range=(0, 2))
    print("[OK] Infeasible generator parameters")


@PROPERTY_SETTINGS
@given(small_instances(n_max=7), st.data())
def test_relabeling_invariance(inst, data):
    permutation = data.draw(st.permutations(range(inst.n)))
    original = brute_force_stdp(inst)
    moved = brute_force_stdp(relabel(inst, permutation))
    assert (original is None) == (moved is None)
    if original is not None:
        assert original[0] == moved[0]


@PROPERTY_SETTINGS
@given(small_instances(n_max=8, c_max=3))
def test_generated_instances_are_conservative(inst):
    assert is_conservative(inst).ok
    assert is_conservative(inst, method='enumeration').ok


if __name__ == "__main__":
    print("Testing Oracles...")
    test_paths_by_vertex_set()
    test_brute_force_stdp()
    test_size_guard()
    test_compare_skips_before_solving()
    test_brute_force_perm_disjoint()
    test_generate_instance()
    test_generator_parameters()
    test_relabeling_invariance()
    test_generated_instances_are_conservative()
    print("\n[SUCCESS] Oracle tests completed!")
