"""Scan x on a 0.001 grid for the five-trial example and report where
e*p*(d+1) <= 1 first holds, for the directed (d) and undirected (d') degrees."""

import argparse
from fractions import Fraction

from lopsided_lll import build_lops_graph, build_vdl_graph, check_condition, example1, max_probability


def scan(step: Fraction):
    rows = []
    x = step
    while x < 1:
        system = example1(x)
        vdl = build_vdl_graph(system)
        lops = build_lops_graph(system)
        p = max_probability(system)
        directed = check_condition(system, vdl, d=vdl.d)
        undirected = check_condition(system, vdl, d=lops.d_prime)
        rows.append((x, p, vdl.d, lops.d_prime, directed.holds_e, undirected.holds_e))
        x += step
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--step", default="1/1000", help="grid step as a fraction")
    ap.add_argument("--csv", action="store_true", help="dump the whole grid")
    args = ap.parse_args()
    rows = scan(Fraction(args.step))
    if args.csv:
        print("x,p,d,d_prime,holds_d,holds_d_prime")
        for x, p, d, dp, hd, hdp in rows:
            print(f"{float(x):.6g},{float(p):.6g},{d},{dp},{int(hd)},{int(hdp)}")
        return
    for label, col in (("d", 4), ("d'", 5)):
        first = next((r for r in rows if r[col]), None)
        if first is None:
            print(f"{label}: condition never holds on the grid")
        else:
            print(f"{label}={first[2] if col == 4 else first[3]}: least x = {float(first[0]):.3f} (p = {float(first[1]):.5f})")


if __name__ == "__main__":
    main()
