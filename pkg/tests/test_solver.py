import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lopsided_lll import (
    EventSystem,
    ForcedTape,
    RandomTape,
    VariableSpec,
    assert_progress,
    build_vdl_graph,
    m_algorithm,
    root_call_indices,
)
from lopsided_lll.errors import DepthLimitError, MissingSnapshotsError
from lopsided_lll.forest import chronological_matches_canonical, witness_from_log
from lopsided_lll.model import EventExpr
from lopsided_lll.solver import ROUND_LIMIT, SUCCESS, check_log

from .conftest import systems

# A consistent four-round run on the five-trial example with the same first and
# last assignments as the published trace:
#   (0,0,1,0,0) -E1-> (0,0,0,0,0) -E1-> (1,1,1,0,0) -E2-> (1,1,0,1,0) -E3-> (1,1,0,0,1)
# Draws: initial sample, then sc(E1), sc(E1), sc(E2), sc(E3) in id order.
GOLDEN_DRAWS = [0, 0, 1, 0, 0, 0, 0, 0, 1, 1, 1, 0, 1, 0, 1]
GOLDEN_STATES = [(0, 0, 1, 0, 0), (0, 0, 0, 0, 0), (1, 1, 1, 0, 0), (1, 1, 0, 1, 0), (1, 1, 0, 0, 1)]


def test_golden_run(ex1, ex1_graph):
    log = m_algorithm(ex1, ex1_graph, ForcedTape(GOLDEN_DRAWS), 100, snapshots=True)
    assert log.outcome == SUCCESS
    assert log.initial_assignment == GOLDEN_STATES[0]
    assert log.final_assignment == GOLDEN_STATES[-1]
    assert log.rounds == 4
    assert [r.event_index for r in log.records] == [1, 1, 2, 3]
    assert [r.depth for r in log.records] == [0, 1, 2, 3]
    assert [r.parent for r in log.records] == [None, 0, 1, 2]
    assert [s for s, _ in log.snapshots] == GOLDEN_STATES[:-1]
    assert assert_progress(log, ex1)
    assert root_call_indices(log) == [1]


def test_only_impossible_event(ex1):
    system = EventSystem.build([VariableSpec.uniform(0, 2)], [EventExpr.never()])
    log = m_algorithm(system, build_vdl_graph(system), ForcedTape([1]), 10)
    assert log.rounds == 0 and log.outcome == SUCCESS
    assert log.final_assignment == log.initial_assignment == (1,)
    assert root_call_indices(log) == []


def test_sure_event_hits_round_limit():
    system = EventSystem.build([VariableSpec.uniform(0, 2)], [EventExpr.always()])
    log = m_algorithm(system, build_vdl_graph(system), RandomTape(1), max_rounds=50)
    assert log.outcome == ROUND_LIMIT
    assert log.rounds == 50


def test_depth_limit_is_an_error_not_a_crash():
    system = EventSystem.build([VariableSpec.uniform(0, 2)], [EventExpr.always()])
    with pytest.raises(DepthLimitError):
        m_algorithm(system, build_vdl_graph(system), RandomTape(1), max_rounds=10**5, max_depth=20)


def test_deep_chain_without_recursion_error():
    system = EventSystem.build([VariableSpec.uniform(0, 2)], [EventExpr.always()])
    log = m_algorithm(system, build_vdl_graph(system), RandomTape(1), max_rounds=20000)
    assert log.rounds == 20000
    forest = witness_from_log(log)
    assert forest.size == 20000


def test_progress_requires_snapshots(ex1, ex1_graph):
    log = m_algorithm(ex1, ex1_graph, RandomTape(0), 100)
    with pytest.raises(MissingSnapshotsError):
        assert_progress(log, ex1)


def test_zero_round_progress_is_vacuous():
    system = EventSystem.build([VariableSpec.uniform(0, 2)], [EventExpr.never()])
    log = m_algorithm(system, build_vdl_graph(system), RandomTape(0), 10, snapshots=True)
    assert assert_progress(log, system)


def test_log_json(ex1, ex1_graph):
    log = m_algorithm(ex1, ex1_graph, RandomTape(11), 100)
    data = json.loads(log.to_json())
    assert data["seed"] == 11
    assert data["rounds"] == log.rounds == len(data["records"])
    assert data["outcome"] == log.outcome


def test_same_seed_same_log(ex1, ex1_graph):
    a = m_algorithm(ex1, ex1_graph, RandomTape(5), 100)
    b = m_algorithm(ex1, ex1_graph, RandomTape(5), 100)
    assert a.to_dict() == b.to_dict()


@settings(max_examples=80, deadline=None)
@given(systems(), st.integers(0, 2**32))
def test_run_invariants(system, seed):
    graph = build_vdl_graph(system)
    log = m_algorithm(system, graph, RandomTape(seed), 200, snapshots=True)
    check_log(log)
    if log.outcome == SUCCESS:
        assert system.occurring(log.final_assignment) == []
    roots = root_call_indices(log)
    assert len(roots) <= system.m
    assert all(a < b for a, b in zip(roots, roots[1:]))
    assert assert_progress(log, system)
    assert chronological_matches_canonical(log)
    witness_from_log(log, graph)


def test_example1_high_x_always_succeeds():
    from lopsided_lll import example1

    system = example1(Fraction(4, 5))
    graph = build_vdl_graph(system)
    for seed in range(300):
        log = m_algorithm(system, graph, RandomTape(seed), 10**4)
        assert log.outcome == SUCCESS
        assert not system.occurring(log.final_assignment)
