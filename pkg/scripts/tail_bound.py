"""Empirical round-count tail of the resampling algorithm against f_n * p^n."""

import argparse
from fractions import Fraction

from lopsided_lll import build_vdl_graph, example1, max_probability
from lopsided_lll.forest import fn_sequence
from lopsided_lll.oracle import estimate_survival


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--x", default="4/5", help="success probability of each trial")
    ap.add_argument("--trials", type=int, default=10**4)
    ap.add_argument("--max-rounds", type=int, default=10**4)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--n-max", type=int, default=10)
    args = ap.parse_args()

    system = example1(Fraction(args.x))
    graph = build_vdl_graph(system)
    p = max_probability(system)
    f = fn_sequence(graph.d, system.m, args.n_max)
    stats = estimate_survival(system, graph, args.trials, args.max_rounds, args.seed)
    print(f"# p = {p}, d = {graph.d}, m = {system.m}, outcomes = {dict(stats.outcomes)}")
    print(stats.to_csv(args.n_max, bound=lambda n: f[n] * p**n), end="")


if __name__ == "__main__":
    main()
