"""m + N - d T along a radius grid for a few maps into the plane.

The sum should settle to a constant; for polynomial maps the constant is
log ||Q|| - log |Q(f(0))| by Jensen's formula.  Run: python3 demos/first_main_theorem.py
"""
import math

from fermatcert.entire import EntireFn
from fermatcert.nevanlinna import HoloMap, RGrid, verify_fmt
from fermatcert.polynomial import HomPoly

P = EntireFn.poly
EXP = EntireFn.exp([0, 1])

PAIRS = {
    "[z-2 : 1 : 0], z0": ((P([-2, 1]), 1, 0), HomPoly(3, {(1, 0, 0): 1}), -math.log(2)),
    "[z^2-1 : z : 1], z0 + 3 z2": ((P([-1, 0, 1]), P([0, 1]), 1), HomPoly(3, {(1, 0, 0): 1, (0, 0, 1): 3}), math.log(1.5)),
    "[e^z : 1 : 1], z0 - z1": ((EXP, 1, 1), HomPoly(3, {(1, 0, 0): 1, (0, 1, 0): -1}), None),
}


def main():
    grid = RGrid.geometric(4, 60, 8)
    for name, (comps, Q, closed) in PAIRS.items():
        rep = verify_fmt(HoloMap(comps), Q, grid)
        print(name, "PASS" if rep.passed else "FAIL", f"(zeros found: {rep.summary['divisor_degree']})")
        for r, T, N, m, dev in rep.rows:
            tail = "" if closed is None else f"   closed form {closed:+.6f}"
            print(f"  r={r:8.3f}  T={T:10.4f}  N={N:10.4f}  m={m:9.4f}  dev={dev:+.6f}{tail}")


if __name__ == "__main__":
    main()
