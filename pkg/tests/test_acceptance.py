"""Acceptance criteria 1 to 9; the summary prints one PASS/FAIL line per criterion."""
import math
import time

import numpy as np
import pytest

from fermatcert.borel import COMPACT, LOG, FermatDecomposition, enumerate_cases
from fermatcert.entire import EntireFn
from fermatcert.geometry import (
    PlaneCurve,
    ProjPoint2,
    delta_quasihom,
    genus_noguchi,
    genus_smooth,
    no_offorigin_singularities,
    singular_locus,
)
from fermatcert.nevanlinna import (
    HoloMap,
    RGrid,
    count_zeros_argument_principle,
    sphere_sandwich,
    verify_fmt,
    verify_pullback_order,
)
from fermatcert.polynomial import HomPoly
from fermatcert.theorems import (
    NOT_MET,
    VERIFIED,
    build_Pn,
    check_theorem_a,
    check_theorem_b,
    theorem_a_decomposition,
    theorem_a_polynomial,
    verify_witnesses,
)

P = EntireFn.poly
EXP = EntireFn.exp([0, 1])


def criterion(n):
    return pytest.mark.criterion(n)


# 1 -------------------------------------------------------------------------------


@criterion(1)
def test_genus_reproduction():
    t0 = time.perf_counter()
    assert genus_smooth(9) == 28
    checked = 0
    for e in range(1, 11):
        for d in range(2 * e + 4, 41):
            if math.gcd(d, e) != 1:
                continue
            assert genus_noguchi(d, e).value == genus_smooth(d) - delta_quasihom(e, d - e)
            checked += 1
    assert checked > 100
    assert time.perf_counter() - t0 < 1.0


# 2 -------------------------------------------------------------------------------


@criterion(2)
def test_borel_case_counts():
    best = min(_timed(lambda: (enumerate_cases(LOG), enumerate_cases(COMPACT))) for _ in range(5))
    assert len(enumerate_cases(LOG)) == 10
    assert len(enumerate_cases(COMPACT)) == 4
    assert best < 1e-3


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


# 3 -------------------------------------------------------------------------------

CRITERION_3_STATUSES = {"constant-witnesses", "line-minus-3-points", "residual-curve"}


@criterion(3)
def test_theorem_a_end_to_end():
    t0 = time.perf_counter()
    cert = check_theorem_a(9, 0, 1)
    low = check_theorem_a(8, 0, 1)
    elapsed = time.perf_counter() - t0
    statuses = [r["status"] for r in cert.case_records]
    witnesses = verify_witnesses(cert, theorem_a_polynomial(9, 0, 1), LOG)
    assert low.verdict == NOT_MET
    assert elapsed < 5.0
    assert len(cert.case_records) == 10
    assert witnesses, witnesses.failures
    assert set(statuses) <= CRITERION_3_STATUSES, statuses
    assert cert.verdict == VERIFIED, [c.name for c in cert.failed_checks] + cert.notes


# 4 -------------------------------------------------------------------------------


@criterion(4)
@pytest.mark.parametrize(
    "args, branch, verdict",
    [((1, 0, 6, 1), "i", VERIFIED), ((1, 1, 9, 2), "iv", VERIFIED), ((3, 1, 9, 0), "ii", VERIFIED), ((2, 1, 9, 0), "iii", NOT_MET)],
)
def test_theorem_b_end_to_end(args, branch, verdict):
    t0 = time.perf_counter()
    cert = check_theorem_b(*args)
    assert time.perf_counter() - t0 < 5.0
    assert cert.parameters["branch"] == branch and cert.verdict == verdict
    if branch == "iv":
        g = cert.genus_records[0]
        assert g["delta0"] == 3 and g["genus"] == 25
        assert g["chain"]["lhs"] > g["chain"]["middle"] > g["chain"]["rhs"]
    if branch == "iii":
        assert cert.check("e_condition").status == "failed"


# 5 -------------------------------------------------------------------------------


@criterion(5)
def test_singularity_oracle():
    t0 = time.perf_counter()
    # X^9 + X^2 - Y^7 - Y^9 homogenized with Z
    F = HomPoly(3, {(9, 0, 0): 1, (2, 0, 7): 1, (0, 7, 2): -1, (0, 9, 0): -1})
    sing = singular_locus(PlaneCurve(F))
    assert len(sing) == 1
    assert sing[0].location.distance(ProjPoint2((0, 0, 1))) < 1e-6
    assert no_offorigin_singularities(9, 2)
    # brute solve: F_X = 9X^8 + 2X = 0 and F_Y = -7Y^6 - 9Y^8 = 0 with XY != 0
    xs = np.roots([9, 0, 0, 0, 0, 0, 0, 2])
    ys = np.roots([9, 0, 7])
    residuals = [abs(x**9 + x**2 - y**7 - y**9) for x in xs for y in ys]
    assert min(residuals) > 1e-6
    assert time.perf_counter() - t0 < 2.0


# 6 -------------------------------------------------------------------------------

Z0 = HomPoly(3, {(1, 0, 0): 1})
Z1 = HomPoly(3, {(0, 1, 0): 1})

# (map, Q, closed-form deviation or None); closed forms follow from Jensen's formula
FMT_PAIRS = [
    ((P([-2, 1]), 1, 0), Z0, -math.log(2)),
    ((P([0, 1]), 1, 0), Z1, 0.0),
    ((P([-1, 0, 1]), P([0, 1]), 1), HomPoly(3, {(1, 0, 0): 1, (0, 0, 1): 3}), math.log(3) - math.log(2)),
    ((EXP, 1, 1), HomPoly(3, {(1, 0, 0): 1, (0, 1, 0): -1}), None),
    ((EXP, EntireFn.exp([0, -1]), 1), HomPoly(3, {(1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1}), None),
]


@criterion(6)
def test_first_main_theorem():
    t0 = time.perf_counter()
    grid = RGrid.geometric(4, 100, 20)
    for comps, Q, closed in FMT_PAIRS:
        rep = verify_fmt(HoloMap(comps), Q, grid)
        assert rep.summary["oscillation_upper_half"] < 0.5
        if closed is not None:
            assert max(abs(v - closed) for v in rep.column("deviation")) < 0.05
    assert time.perf_counter() - t0 < 30.0


# 7 -------------------------------------------------------------------------------


@criterion(7)
def test_pullback_order_identity():
    dec = theorem_a_decomposition(9, 0, 1)
    grid = RGrid.geometric(5, 50, 10)
    for comps in [(P([0, 1]), 1, 0), (EXP, 1, 1)]:
        rep = verify_pullback_order(HoloMap(comps), dec, grid)
        assert rep.summary["oscillation_upper_half"] < 0.5
        assert rep.passed
    c1, c2 = sphere_sandwich(dec)
    # |D_i(w)| <= sum |coefficients| on the unit sphere, so C2 has an explicit ceiling
    ceiling = max(sum(abs(c) for c in D.terms.values()) for D in dec.divisors()) ** (1 / dec.d)
    assert 0 < c1 <= c2 <= ceiling
    one = HomPoly(3, {(0, 0, 0): 1})
    fermat = FermatDecomposition(9, (0, 0, 0), (one, one, one), LOG)
    f1, f2 = sphere_sandwich(fermat)
    assert 3**-0.5 <= f1 <= f2  # max |w_i| >= |w| / sqrt(3)


# 8 -------------------------------------------------------------------------------


def _shift(coeffs, c):
    """Coefficients (low to high) of p(z + c)."""
    p = np.polynomial.Polynomial(coeffs)
    return (p(np.polynomial.Polynomial([c, 1]))).coef


@criterion(8)
def test_argument_principle_cross_oracle():
    rng = np.random.default_rng(2024)
    agree, total = 0, 0
    while total < 100:
        if total % 2 == 0:
            # random coefficients; generic simple roots from numpy
            deg = int(rng.integers(1, 11))
            coeffs = rng.integers(-9, 10, size=deg + 1).astype(float)
            if coeffs[-1] == 0:
                continue
            roots = [(r, 1) for r in np.roots(coeffs[::-1])]
        else:
            # products of integer factors with multiplicity: roots known exactly
            coeffs, roots = np.array([1.0]), []
            while len(coeffs) - 1 < 2 or rng.random() < 0.5:
                k = int(rng.integers(1, 4))
                if rng.random() < 0.5:
                    a = int(rng.integers(-3, 4))
                    fac, pts = np.array([-a, 1.0]), [a]
                else:
                    b = int(rng.integers(1, 5))
                    fac, pts = np.array([b, 0, 1.0]), [1j * math.sqrt(b), -1j * math.sqrt(b)]
                if len(coeffs) - 1 + k * (len(fac) - 1) > 10:
                    break
                for _ in range(k):
                    coeffs = np.polynomial.polynomial.polymul(coeffs, fac)
                roots += [(p, k) for p in pts]
        center = complex(rng.normal(), rng.normal())
        r = float(rng.uniform(0.3, 4))
        if min(abs(abs(z - center) - r) for z, _ in roots) < 1e-3:
            continue  # grazing disk
        expected = sum(k for z, k in roots if abs(z - center) < r)
        got = count_zeros_argument_principle(P(_shift(coeffs, center)), r)
        agree += got == expected
        total += 1
    assert agree == total == 100


# 9 -------------------------------------------------------------------------------


@criterion(9)
def test_tower_degree_law():
    t0 = time.perf_counter()
    for n in range(1, 4):
        for d in range(1, 5):
            for e in range(d):
                assert build_Pn(n, d, e).deg == d**n
    assert time.perf_counter() - t0 < 10.0
