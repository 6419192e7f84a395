"""Iterated substitution P_n = P_{n-1}(P(z0, z1), ..., P(z_{n-1}, z_n)).

Run: python3 demos/tower_polynomials.py
"""
from fermatcert.errors import ResourceError
from fermatcert.textformat import format_poly
from fermatcert.theorems import build_Pn


def main():
    print("P_2 for d=2, e=1:")
    print("  ", format_poly(build_Pn(2, 2, 1)))
    print()
    print(" n  d  e   degree  terms")
    for n in (1, 2, 3):
        for d, e in ((3, 1), (4, 1), (5, 2)):
            try:
                P = build_Pn(n, d, e)
                print(f"{n:2d} {d:2d} {e:2d} {P.deg:8d} {len(P.terms):6d}")
            except ResourceError as exc:
                print(f"{n:2d} {d:2d} {e:2d}   term cap hit ({exc})")


if __name__ == "__main__":
    main()
