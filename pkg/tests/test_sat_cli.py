import io
import json
import random
from fractions import Fraction
from pathlib import Path

import pytest

from lopsided_lll import build_vdl_graph, event_probability, example1, is_vdl
from lopsided_lll.cli import run_command
from lopsided_lll.errors import DimacsParseError
from lopsided_lll.model import EQ, Atom
from lopsided_lll.sat import SatInstance, parse_dimacs, random_bounded_sat, sat_to_system, write_dimacs

FIVE_BY_THREE = "c five variables, three clauses\np cnf 5 3\n1 -2 3 0\nc interior comment\n-1 4 0\n2 -4 5 0\n"


def strip_comments(text):
    return "".join(line + "\n" for line in text.splitlines() if not line.startswith("c"))


def test_parse_simple():
    inst = parse_dimacs("p cnf 2 1\n1 -2 0")
    assert inst == SatInstance(2, ((1, -2),))


def test_tautology_dropped():
    with pytest.warns(UserWarning):
        inst = parse_dimacs("p cnf 1 1\n1 -1 0")
    assert inst.clauses == ()
    assert sat_to_system(inst).m == 0


def test_roundtrip_modulo_comments():
    inst = parse_dimacs(FIVE_BY_THREE)
    assert len(inst.clauses) == 3
    assert write_dimacs(inst) == strip_comments(FIVE_BY_THREE)
    assert parse_dimacs(write_dimacs(inst)) == inst


def test_clause_may_span_lines():
    assert parse_dimacs("p cnf 3 1\n1 2\n-3 0\n").clauses == ((1, 2, -3),)


@pytest.mark.parametrize(
    "text,line",
    [
        ("p cnf x 1\n1 0\n", 1),
        ("1 0\n", 1),
        ("p cnf 2 1\n1 3 0\n", 2),
        ("p cnf 2 1\n1 2\n", 2),
        ("p cnf 2 2\n1 2 0\n", 2),
        ("c only\n", 1),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(DimacsParseError) as info:
        parse_dimacs(text)
    assert info.value.line == line


def test_clause_event_encoding():
    system = sat_to_system(SatInstance(2, ((1, -2),)))
    e = system.events[0]
    assert e.expr.terms == ((Atom(0, EQ, 0), Atom(1, EQ, 1)),)
    assert e.scope == {0, 1}
    assert event_probability(e, system) == Fraction(1, 4)


def test_empty_clause_is_sure_event():
    system = sat_to_system(SatInstance(1, ((),)))
    assert event_probability(system.events[0], system) == 1


def test_same_polarity_clauses_have_no_vdl_edge():
    system = sat_to_system(SatInstance(3, ((1, 2), (1, 3))))
    e1, e2 = system.events
    assert not is_vdl(e1, e2, system) and not is_vdl(e2, e1, system)
    opposite = sat_to_system(SatInstance(3, ((1, 2), (-1, 3))))
    assert is_vdl(*opposite.events, opposite)
    assert build_vdl_graph(opposite).edges == {(1, 2), (2, 1)}


def test_random_bounded_sat_respects_occurrence_bound():
    inst = random_bounded_sat(random.Random(0), 20, 30, 4, 3)
    counts = [0] * 21
    for clause in inst.clauses:
        assert len(clause) == 4 == len({abs(l) for l in clause})
        for lit in clause:
            counts[abs(lit)] += 1
    assert max(counts) <= 3


# CLI


@pytest.fixture
def instances(tmp_path):
    paths = {}
    for name, x in (("ex08", Fraction(4, 5)), ("ex05", Fraction(1, 2))):
        p = tmp_path / f"{name}.json"
        p.write_text(example1(x).to_json())
        paths[name] = str(p)
    cnf = tmp_path / "small.cnf"
    cnf.write_text(FIVE_BY_THREE)
    paths["cnf"] = str(cnf)
    return paths


def run(argv):
    out = io.StringIO()
    code = run_command(argv, out)
    return code, out.getvalue()


def test_cli_check(instances):
    code, out = run(["check", instances["ex08"]])
    assert code == 0
    assert "holds_e: true" in out and "d: 1" in out and "d_prime: 2" in out


def test_cli_solve_deterministic(instances, tmp_path):
    forest_path = tmp_path / "f.json"
    first = run(["solve", instances["ex05"], "--seed", "9", "--snapshots", "--forest", str(forest_path)])
    second = run(["solve", instances["ex05"], "--seed", "9", "--snapshots"])
    assert first == second and first[0] == 0
    code, out = run(["validate", instances["ex05"], str(forest_path), "--seed", "1", "--trials", "50"])
    assert code == 0 and "successes:" in out


def test_cli_count():
    code, out = run(["count", "--d", "1", "--m", "2", "--n", "2"])
    assert code == 0 and "f_2: 5" in out
    code, out = run(["count", "--d", "1", "--m", "3", "--p", "21/125", "--table", "5"])
    assert out.splitlines()[0] == "n,t_n,f_n,f_n_p_n"


def test_cli_graph_and_oracle(instances):
    code, out = run(["graph", instances["ex05"], "--which", "vdl"])
    assert code == 0 and "E1 -> E2;" in out
    code, out = run(["graph", instances["cnf"], "--format", "json"])
    assert json.loads(out)[0]["kind"] == "vdl"
    code, out = run(["oracle", instances["ex05"]])
    assert code == 0 and "vdl_edges_full_omega_agree: true" in out


def test_cli_simulate(instances):
    code, out = run(["simulate", instances["ex08"], "--trials", "100", "--seed", "4"])
    assert code == 0
    assert out.splitlines()[0] == "n,survivors,p_hat,stderr,bound"
    assert run(["simulate", instances["ex08"], "--trials", "100", "--seed", "4"])[1] == out


def test_cli_exit_codes(tmp_path, instances):
    bad = tmp_path / "bad.cnf"
    bad.write_text("p cnf 2 1\n1 5 0\n")
    assert run(["check", str(bad)])[0] == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run(["check", str(broken)])[0] == 2
    assert run(["oracle", instances["ex05"], "--budget", "4"])[0] == 3
    sure = tmp_path / "sure.cnf"
    sure.write_text("p cnf 1 1\n0\n")
    assert run(["solve", str(sure), "--max-rounds", "20"])[0] == 4
    forest = tmp_path / "forest.json"
    forest.write_text(json.dumps({"roots": [{"label": 1}, {"label": 1}]}))
    assert run(["validate", instances["ex05"], str(forest)])[0] == 2


def test_cli_internal_assertion_exit_code(instances, monkeypatch):
    from lopsided_lll import cli

    monkeypatch.setattr(cli, "assert_progress", lambda log, system: False)
    assert run(["solve", instances["ex05"], "--snapshots"])[0] == 5


def test_shipped_instances_load():
    root = Path(__file__).resolve().parents[1] / "instances"
    for path in sorted(root.iterdir()):
        assert run(["check", str(path)])[0] == 0
