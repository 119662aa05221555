"""Generate bounded-occurrence k-SAT instances, keep those meeting e*p*(d+1) <= 1,
and solve them with the resampling algorithm."""

import argparse
import random
import time
from pathlib import Path

from lopsided_lll import RandomTape, build_vdl_graph, check_condition, m_algorithm
from lopsided_lll.sat import random_bounded_sat, sat_to_system, write_dimacs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=50, help="instances to solve")
    ap.add_argument("--vars", type=int, default=30)
    ap.add_argument("--clauses", type=int, default=20)
    ap.add_argument("--width", type=int, default=5)
    ap.add_argument("--max-occ", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, help="directory to write solved instances to")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    solved = skipped = 0
    rounds = []
    start = time.perf_counter()
    while solved < args.count:
        inst = random_bounded_sat(rng, args.vars, args.clauses, args.width, args.max_occ)
        system = sat_to_system(inst)
        graph = build_vdl_graph(system)
        if not check_condition(system, graph).holds_e:
            skipped += 1
            continue
        log = m_algorithm(system, graph, RandomTape(rng.getrandbits(64)), max_rounds=10**5)
        if not (log.succeeded and inst.satisfied_by(log.final_assignment)):
            raise SystemExit(f"instance {solved} not solved: {log.outcome}")
        rounds.append(log.rounds)
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / f"inst{solved:03d}.cnf").write_text(write_dimacs(inst))
        solved += 1
    mean = sum(rounds) / len(rounds)
    print(f"solved {solved}, skipped {skipped} (condition fails), mean rounds {mean:.2f}, max {max(rounds)}")
    print(f"elapsed {time.perf_counter() - start:.2f}s")


if __name__ == "__main__":
    main()
