"""Command-line entry point.

Exit codes: 0 ok, 2 parse error, 3 budget exceeded, 4 round/depth limit,
5 internal assertion failure, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .dependency import build_lops_graph, build_vdl_graph, check_claim1, check_condition, check_erdos_spencer
from .errors import (
    BudgetError,
    DepthLimitError,
    DimacsParseError,
    InfeasibleForestError,
    LLLError,
    MalformedEventError,
    MalformedForestError,
    MalformedLogError,
)
from .forest import LabeledForest, bound_report, count_table_csv, fn_sequence, val_alg, witness_from_log
from .model import EventSystem, event_probability
from .oracle import build_omega, estimate_survival, exists_good_assignment, vdl_edges_full
from .sat import parse_dimacs, sat_to_system
from .solver import assert_progress, m_algorithm
from .tape import RandomTape

EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_ROUND_LIMIT = 4
EXIT_INTERNAL = 5


class InternalCheckFailed(Exception):
    pass


def load_system(path: str) -> EventSystem:
    text = Path(path).read_text()
    stripped = text.lstrip()
    if path.endswith((".cnf", ".dimacs")) or stripped.startswith(("p ", "c")):
        return sat_to_system(parse_dimacs(text))
    try:
        return EventSystem.from_json(text)
    except json.JSONDecodeError as exc:
        raise MalformedEventError(f"{path}: invalid JSON ({exc})") from None
    except ValueError as exc:
        raise MalformedEventError(f"{path}: {exc}") from None


def _fmt_assignment(a) -> str:
    return " ".join(map(str, a))


def cmd_check(args, out) -> int:
    system = load_system(args.instance)
    vdl = build_vdl_graph(system)
    lops = build_lops_graph(system)
    report = check_condition(system, vdl)
    classical = check_condition(system, vdl, d=lops.d_prime)
    print(f"p: {report.p} ({float(report.p):.6g})", file=out)
    print(f"d: {report.d}", file=out)
    print(f"d_prime: {lops.d_prime}", file=out)
    print(f"holds_e: {str(report.holds_e).lower()}", file=out)
    print(f"holds_strong: {str(report.holds_strong).lower()}", file=out)
    print(f"rate: {report.rate:.6g}", file=out)
    print(f"holds_e_undirected: {str(classical.holds_e).lower()}", file=out)
    print(f"conservative: {str(system.conservative).lower()}", file=out)
    return 0


def cmd_graph(args, out) -> int:
    system = load_system(args.instance)
    graphs = []
    if args.which in ("vdl", "both"):
        graphs.append(build_vdl_graph(system))
    if args.which in ("lops", "both"):
        graphs.append(build_lops_graph(system))
    if args.format == "dot":
        for g in graphs:
            out.write(g.to_dot())
    else:
        print(json.dumps([g.to_dict() for g in graphs], indent=2), file=out)
    return 0


def cmd_solve(args, out) -> int:
    system = load_system(args.instance)
    graph = build_vdl_graph(system)
    log = m_algorithm(system, graph, RandomTape(args.seed), args.max_rounds, snapshots=args.snapshots)
    forest = witness_from_log(log, graph)
    if args.snapshots and not assert_progress(log, system):
        raise InternalCheckFailed("progress invariant violated")
    if log.succeeded and system.occurring(log.final_assignment):
        raise InternalCheckFailed("final assignment still has occurring events")
    print(f"outcome: {log.outcome}", file=out)
    print(f"rounds: {log.rounds}", file=out)
    print(f"seed: {args.seed}", file=out)
    print(f"assignment: {_fmt_assignment(log.final_assignment)}", file=out)
    if args.forest:
        Path(args.forest).write_text(forest.to_json())
    if args.log:
        Path(args.log).write_text(log.to_json())
    if args.print_forest:
        print(forest.to_json(), file=out)
    return 0 if log.succeeded else EXIT_ROUND_LIMIT


def cmd_validate(args, out) -> int:
    system = load_system(args.instance)
    graph = build_vdl_graph(system)
    try:
        forest = LabeledForest.from_json(Path(args.forest).read_text())
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise MalformedForestError(f"{args.forest}: {exc!r}") from None
    successes = 0
    for t in range(args.trials):
        result = val_alg(system, forest, RandomTape(args.seed + t), graph)
        successes += result.success
        if args.trials == 1:
            status = "success" if result.success else f"failure at {result.failed_at}"
            print(f"result: {status}", file=out)
    print(f"nodes: {forest.size}", file=out)
    print(f"successes: {successes}/{args.trials}", file=out)
    return 0


def cmd_simulate(args, out) -> int:
    system = load_system(args.instance)
    graph = build_vdl_graph(system)
    stats = estimate_survival(system, graph, args.trials, args.max_rounds, args.seed)
    p = max((event_probability(e, system) for e in system.events), default=Fraction(0))
    n_max = args.n_max if args.n_max is not None else stats.max_rounds_seen + 1
    f = fn_sequence(graph.d, system.m, n_max)
    if args.format == "json":
        print(stats.to_json(), file=out)
    else:
        out.write(stats.to_csv(n_max, bound=lambda n: f[n] * p**n))
    return 0


def cmd_count(args, out) -> int:
    p = Fraction(args.p) if args.p is not None else Fraction(0)
    if args.n is not None and args.table is None:
        rep = bound_report(args.d, args.m, args.n, p)
        print(f"t_{args.n}: {fn_sequence(args.d, 1, args.n)[args.n]}", file=out)
        print(f"f_{args.n}: {rep.fn_exact}", file=out)
        if args.p is not None:
            print(f"f_n_p_n: {rep.fn_pn} ({float(rep.fn_pn):.6g})", file=out)
            print(f"growth_base: {rep.growth_base:.6g}", file=out)
        return 0
    out.write(count_table_csv(args.d, args.m, p, args.table if args.table is not None else args.n or 10))
    return 0


def cmd_oracle(args, out) -> int:
    system = load_system(args.instance)
    table = build_omega(system)
    vdl = build_vdl_graph(system)
    print(f"omega_size: {len(table)}", file=out)
    for e in system.events:
        print(f"Pr[E{e.index}]: {event_probability(e, system)}", file=out)
    good = exists_good_assignment(table)
    print(f"good_assignment: {'none' if good is None else _fmt_assignment(good)}", file=out)
    full_edges = vdl_edges_full(table)
    print(f"vdl_edges: {sorted(vdl.edges)}", file=out)
    print(f"vdl_edges_full_omega_agree: {str(full_edges == vdl.edges).lower()}", file=out)
    claim = check_claim1(system, vdl)
    es = check_erdos_spencer(system, vdl, exhaustive=True, table=table)
    print(f"claim1: {str(claim.holds).lower()}", file=out)
    print(f"erdos_spencer: {str(es.holds).lower()} (checked {es.checked}, skipped {len(es.skipped)})", file=out)
    if full_edges != vdl.edges or not claim or not es:
        raise InternalCheckFailed("oracle disagrees with the scope-restricted computation")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-rounds", type=int, default=10**5)
    common.add_argument("--trials", type=int, default=1)
    common.add_argument("--budget", type=int, default=None, help="enumeration budget (also LLL_BUDGET)")

    parser = argparse.ArgumentParser(prog="lll", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="print p, d and the symmetric conditions")
    p.add_argument("instance")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("graph", parents=[common], help="export VDL / lopsidependency graphs")
    p.add_argument("instance")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("--which", choices=("vdl", "lops", "both"), default="both")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("solve", parents=[common], help="run the resampling algorithm")
    p.add_argument("instance")
    p.add_argument("--snapshots", action="store_true", help="record assignments and check progress")
    p.add_argument("--forest", help="write the witness forest JSON here")
    p.add_argument("--log", help="write the execution log JSON here")
    p.add_argument("--print-forest", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", parents=[common], help="run the validation algorithm on a forest")
    p.add_argument("instance")
    p.add_argument("forest")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("simulate", parents=[common], help="survival statistics of the round count")
    p.add_argument("instance")
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("count", parents=[common], help="t_n, f_n and the f_n p^n bound")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", default=None, help="rational max probability, e.g. 21/125")
    p.add_argument("--table", type=int, default=None, help="print a CSV table for n = 0..TABLE")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("oracle", parents=[common], help="full product-space cross-checks")
    p.add_argument("instance")
    p.set_defaults(func=cmd_oracle)
    return parser


def run_command(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    previous = os.environ.get("LLL_BUDGET")
    if args.budget is not None:
        os.environ["LLL_BUDGET"] = str(args.budget)
    try:
        return args.func(args, out)
    except (DimacsParseError, MalformedEventError, MalformedForestError, InfeasibleForestError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DepthLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ROUND_LIMIT
    except (InternalCheckFailed, MalformedLogError, AssertionError) as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (LLLError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    finally:
        if args.budget is not None:
            if previous is None:
                os.environ.pop("LLL_BUDGET", None)
            else:
                os.environ["LLL_BUDGET"] = previous


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
