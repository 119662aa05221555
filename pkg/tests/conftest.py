from fractions import Fraction

import pytest
from hypothesis import strategies as st

from lopsided_lll import EventSystem, VariableSpec, build_vdl_graph, example1
from lopsided_lll.model import EQ, NE, Atom, EventExpr


@pytest.fixture
def ex1():
    return example1(Fraction(1, 2))


@pytest.fixture
def ex1_graph(ex1):
    return build_vdl_graph(ex1)


@st.composite
def variable_specs(draw, max_vars=4, max_domain=3):
    l = draw(st.integers(1, max_vars))
    variables = []
    for i in range(l):
        k = draw(st.integers(1, max_domain))
        raw = draw(st.lists(st.integers(0, 4), min_size=k, max_size=k).filter(lambda r: sum(r) > 0))
        variables.append(VariableSpec(i, tuple(Fraction(r, sum(raw)) for r in raw)))
    return variables


@st.composite
def systems(draw, max_vars=4, max_domain=3, max_events=4):
    variables = draw(variable_specs(max_vars, max_domain))
    l = len(variables)

    def atom():
        return st.integers(0, l - 1).flatmap(
            lambda v: st.builds(
                Atom,
                st.just(v),
                st.sampled_from([EQ, NE]) if variables[v].domain_size > 1 else st.just(EQ),
                st.integers(0, variables[v].domain_size - 1),
            )
        )

    term = st.lists(atom(), min_size=1, max_size=3).map(tuple)
    expr = st.lists(term, min_size=0, max_size=2).map(EventExpr)
    exprs = draw(st.lists(expr, min_size=1, max_size=max_events))
    return EventSystem.build(variables, exprs)


# acceptance summary: one PASS/FAIL line per criterion at the end of the run

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion number and summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, text = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        prev = _criteria.get(n, (text, True))
        _criteria[n] = (text, prev[1] and rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        text, ok = _criteria[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {text}")
