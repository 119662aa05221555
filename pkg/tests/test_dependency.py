import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from lopsided_lll import (
    EventSystem,
    VariableSpec,
    build_lops_graph,
    build_vdl_graph,
    check_claim1,
    check_condition,
    check_erdos_spencer,
    example1,
    is_lopsidependent,
    is_vdl,
    random_system,
)
from lopsided_lll.dependency import VDLGraph, condition
from lopsided_lll.errors import DependencyBudgetError
from lopsided_lll.model import EQ, Atom, EventExpr
from lopsided_lll.oracle import build_omega, lops_full, vdl_edges_full

from .conftest import systems


def test_vdl_pairs_example1(ex1):
    e1, e2, e3 = ex1.events
    assert is_vdl(e1, e2, ex1)
    assert not is_vdl(e2, e1, ex1)
    assert is_vdl(e2, e3, ex1) and is_vdl(e3, e2, ex1)
    for e in ex1.events:
        assert not is_vdl(e, e, ex1)


def test_vdl_graph_example1(ex1):
    g = build_vdl_graph(ex1)
    assert g.edges == {(1, 2), (2, 3), (3, 2)}
    assert g.d == 1
    assert g.gamma == {1: {2}, 2: {3}, 3: {2}}


def test_lops_example1(ex1):
    e1, e2, e3 = ex1.events
    assert is_lopsidependent(e1, e2, ex1)
    assert not is_lopsidependent(e1, e3, ex1)
    assert not is_lopsidependent(e2, e2, ex1)
    lops = build_lops_graph(ex1)
    assert lops.edges == {frozenset({1, 2}), frozenset({2, 3})}
    assert lops.d_prime == 2
    # the directed graph is strictly sparser: Gamma(E2) = {E3} inside N(E2) = {E1, E3}
    assert build_vdl_graph(ex1).gamma[2] < lops.neighborhoods[2]


def test_disjoint_scopes_give_empty_graph():
    variables = [VariableSpec.uniform(i, 2) for i in range(3)]
    exprs = [EventExpr.conj(Atom(i, EQ, 0)) for i in range(3)]
    g = build_vdl_graph(EventSystem.build(variables, exprs))
    assert g.edges == frozenset() and g.d == 0


def test_dependency_budget(ex1):
    with pytest.raises(DependencyBudgetError):
        is_vdl(ex1.events[0], ex1.events[1], ex1, budget=4)


def test_vdl_matches_full_omega_on_random_3_event_systems():
    rng = random.Random(7)
    done = 0
    while done < 50:
        system = random_system(rng, max_vars=3, max_domain=2, max_events=3)
        if system.m != 3:
            continue
        assert build_vdl_graph(system).edges == vdl_edges_full(build_omega(system))
        done += 1


def test_claim1_examples(ex1):
    assert check_claim1(ex1)
    single = EventSystem.build([VariableSpec.uniform(0, 2)], [EventExpr.conj(Atom(0, EQ, 1))])
    assert check_claim1(single)


def test_erdos_spencer_example1_exact():
    system = example1(Fraction(1, 2))
    g = build_vdl_graph(system)
    report = check_erdos_spencer(system, g, exhaustive=True)
    assert report.holds and not report.skipped
    # independent 32-point enumeration of Pr[E1 | not E3]
    e1, _, e3 = system.events
    num = den = Fraction(0)
    for a in itertools.product((0, 1), repeat=5):
        if not e3.occurs(a):
            den += Fraction(1, 32)
            num += Fraction(1, 32) if e1.occurs(a) else 0
    assert num / den <= Fraction(3, 8)
    assert num / den == Fraction(3, 8)


def test_erdos_spencer_skips_zero_probability_condition():
    variables = [VariableSpec.uniform(0, 2), VariableSpec.uniform(1, 2)]
    exprs = [EventExpr.conj(Atom(1, EQ, 0)), EventExpr.always()]
    system = EventSystem.build(variables, exprs)
    report = check_erdos_spencer(system, build_vdl_graph(system), exhaustive=True)
    assert report.holds
    assert (1, (2,)) in report.skipped


def test_condition_examples():
    g = build_vdl_graph(example1(Fraction(4, 5)))
    assert check_condition(example1(Fraction(4, 5)), g).holds_e
    half = check_condition(example1(Fraction(1, 2)), g)
    assert not half.holds_e
    assert half.p == Fraction(3, 8) and half.d == 1
    assert math.e * float(half.p) * 2 == pytest.approx(2.0387, rel=1e-4)
    boundary = 1 / (math.e * 2)
    assert condition(Fraction(boundary), 1).holds_e


def test_condition_strong_factor_zero_degree():
    r = condition(Fraction(9, 10), 0)
    assert r.rate == pytest.approx(0.9) and r.holds_strong
    assert not condition(Fraction(1), 0).holds_strong


def test_graph_exports(ex1):
    g = build_vdl_graph(ex1)
    assert "E1 -> E2;" in g.to_dot() and "E3 -> E2;" in g.to_dot()
    assert g.to_dict()["edges"] == [[1, 2], [2, 3], [3, 2]]
    lops = build_lops_graph(ex1)
    assert "E1 -- E2;" in lops.to_dot()
    assert lops.to_dict()["d_prime"] == 2


def test_vdl_graph_rejects_self_loop():
    with pytest.raises(ValueError):
        VDLGraph(2, frozenset({(1, 1)}))


@settings(max_examples=80, deadline=None)
@given(systems())
def test_claim1_and_full_omega_agree(system):
    vdl = build_vdl_graph(system)
    lops = build_lops_graph(system)
    assert check_claim1(system, vdl, lops)
    table = build_omega(system)
    assert vdl.edges == vdl_edges_full(table)
    for i, j in itertools.combinations(range(1, system.m + 1), 2):
        assert (frozenset((i, j)) in lops.edges) == lops_full(table, i, j)


@settings(max_examples=80, deadline=None)
@given(systems())
def test_graph_invariants(system):
    vdl = build_vdl_graph(system)
    lops = build_lops_graph(system)
    for i, j in vdl.edges:
        assert i != j
        assert system.event(i).scope & system.event(j).scope
    assert vdl.d <= lops.d_prime
    for j in range(1, system.m + 1):
        assert vdl.gamma[j] <= lops.neighborhoods[j]


@settings(max_examples=80, deadline=None)
@given(systems())
def test_erdos_spencer_holds(system):
    report = check_erdos_spencer(system, build_vdl_graph(system), exhaustive=True)
    assert report.holds, report.violations
