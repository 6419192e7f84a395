"""Classify P(z0, z1) = a P(b z1, z2) into its four branches and certify each.

P(x, y) = x^d + y^d + x^e y^(d-e).  Run: python3 demos/theorem_b_branches.py
"""
from fermatcert.theorems import check_theorem_b

SAMPLES = [
    (1, 0, 6, 1),  # b = 0
    (3, 1, 9, 0),  # a b^d away from 1 and 2
    (2, 1, 9, 0),  # a b^d = 2 needs e > 0
    (2, 1, 9, 2),
    (1, 1, 9, 2),  # a b^d = 1: genus route
    (3 / 2**9, 2, 9, 0),  # same as (3, 1, 9, 0) after rescaling z2
]


def main():
    for a, b, d, e in SAMPLES:
        cert = check_theorem_b(a, b, d, e)
        failed = ", ".join(c.name for c in cert.failed_checks) or "-"
        print(f"a={a!s:>12} b={b} d={d} e={e}: branch ({cert.parameters['branch']}) {cert.verdict:20s} failed: {failed}")
        for g in cert.genus_records:
            ch = g["chain"]
            print(f"    genus {g['genus']} = {g['arithmetic_genus']} - {g['delta0']};"
                  f" chain {ch['lhs']:.6f} > {ch['middle']:.6f} > {ch['rhs']:.6f}")


if __name__ == "__main__":
    main()
