"""Regenerate the files under instances/."""

from fractions import Fraction
from pathlib import Path

from lopsided_lll import example1

ROOT = Path(__file__).resolve().parents[1] / "instances"

SMALL_CNF = "c small 3-clause instance\np cnf 5 3\n1 -2 3 0\n-1 4 0\n2 -4 5 0\n"


def main():
    ROOT.mkdir(exist_ok=True)
    (ROOT / "example1_x1_2.json").write_text(example1(Fraction(1, 2)).to_json() + "\n")
    (ROOT / "example1_x4_5.json").write_text(example1(Fraction(4, 5)).to_json() + "\n")
    (ROOT / "small.cnf").write_text(SMALL_CNF)
    for path in sorted(ROOT.iterdir()):
        print(path)


if __name__ == "__main__":
    main()
