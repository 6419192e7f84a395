import cmath
import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from fermatcert.borel import COMPACT, LOG
from fermatcert.entire import EntireFn, pullback
from fermatcert.errors import DomainError, ResourceError
from fermatcert.polynomial import HomPoly
from fermatcert.textformat import emit_document, parse_document
from fermatcert.theorems import (
    NOT_MET,
    VERIFIED,
    Certificate,
    build_Pn,
    check_theorem_a,
    check_theorem_b,
    classify_branch,
    theorem_a_polynomial,
    theorem_b_polynomial,
    verify_witnesses,
)


def _witness_cert(points):
    rec = {"label": "x", "witnesses": [{"point": [[z.real, z.imag] for z in map(complex, p)], "multiplicity": 1} for p in points]}
    return Certificate("A", {}, case_records=[rec])


# -- Theorem A ------------------------------------------------------------------------


@pytest.mark.parametrize("eps", [(1, 1), (0.5, 2), (2, 0.5), (1j, 3)])
def test_theorem_a_verified(eps):
    cert = check_theorem_a(9, *eps)
    assert cert.verdict == VERIFIED
    assert all(c.status == "passed" for c in cert.hypothesis_checks)
    assert len(cert.case_records) == 10
    assert verify_witnesses(cert, theorem_a_polynomial(9, *eps), LOG)
    assert {"curve": "smooth plane curve of degree 9", "genus": 28} in cert.genus_records
    assert all(g["genus"] >= 2 for g in cert.genus_records)


def test_theorem_a_degree_boundary():
    cert = check_theorem_a(8, 0, 1)
    assert cert.verdict == NOT_MET and cert.check("degree").status == "failed"


def test_theorem_a_both_eps_zero():
    cert = check_theorem_a(9, 0, 0)
    assert cert.verdict == NOT_MET
    assert cert.check("eps_at_roots_of_minus_one").status == "failed"


def test_theorem_a_eps_vanishing_at_root():
    # eps0 lam^2 + eps1 = 0 at lam = exp(i pi / 9)
    lam = cmath.exp(1j * math.pi / 9)
    cert = check_theorem_a(9, 1, -(lam**2))
    assert cert.check("eps_at_roots_of_minus_one").status == "failed"


def test_theorem_a_eps0_zero_is_rejected_with_counterexample():
    cert = check_theorem_a(9, 0, 1)
    assert cert.verdict == NOT_MET
    ev = cert.check("residual_curves_nondegenerate_and_affinely_smooth").evidence
    assert ev["eps0"]["degenerate_residual_curve"]
    assert any("iv.3" in n and "nowhere zero" in n for n in cert.notes)


@pytest.mark.parametrize("d", range(9, 21))
def test_eps0_zero_counterexample_by_hand(d):
    # on the line z2 = mu z1 the form is z0^d + t^d (1 + mu^(d-2) + mu^d); pick mu killing the bracket
    mu = np.roots([1, 0, 1] + [0] * (d - 3) + [1])[0]
    f = (EntireFn.constant(1), EntireFn.exp([0, 1]), EntireFn.exp([0, 1], p=mu))
    h = pullback(theorem_a_polynomial(d, 0, 1), f)
    assert h.is_constant() and abs(h(0.3 + 0.2j) - 1) < 1e-9


@pytest.mark.parametrize("d", range(9, 21))
def test_sweep_valid_parameters(d):
    assert check_theorem_a(d, 0.5, 2).verdict == VERIFIED


@pytest.mark.parametrize("d", range(3, 9))
def test_sweep_below_nine(d):
    assert check_theorem_a(d, 0.5, 2).verdict == NOT_MET


@pytest.mark.parametrize("eps", [(1, 1), (0.5, 2), (0, 1), (0, 0), (1j, 3)])
def test_mirror_symmetry(eps):
    assert check_theorem_a(9, *eps).verdict == check_theorem_a(9, eps[1], eps[0]).verdict


# -- Theorem B ----------------------------------------------------------------------------


@pytest.mark.parametrize(
    "args, branch, verdict",
    [
        ((1, 0, 6, 1), "i", VERIFIED),
        ((1, 1, 9, 2), "iv", VERIFIED),
        ((3, 1, 9, 0), "ii", VERIFIED),
        ((2, 1, 9, 0), "iii", NOT_MET),
        ((1, 0, 4, 1), "i", NOT_MET),
        ((1, 1, 9, 3), "iv", NOT_MET),  # gcd(9, 3) = 3
        ((3, 1, 7, 2), "ii", NOT_MET),  # 7 is not > 2e + 3
    ],
)
def test_theorem_b_examples(args, branch, verdict):
    cert = check_theorem_b(*args)
    assert cert.parameters["branch"] == branch
    assert cert.verdict == verdict
    if verdict == NOT_MET:
        assert cert.failed_checks


def test_theorem_b_branch_iv_trace():
    cert = check_theorem_b(1, 1, 9, 2)
    g = cert.genus_records[0]
    assert g["genus"] == 25 and g["delta0"] == 3 and g["arithmetic_genus"] == 28
    assert g["chain"]["lhs"] > g["chain"]["middle"] > g["chain"]["rhs"]


def test_theorem_b_compact_witnesses_on_curve():
    for args in [(1, 0, 6, 1), (3, 1, 9, 0)]:
        cert = check_theorem_b(*args)
        F = theorem_b_polynomial(*args)
        chk = verify_witnesses(cert, F, COMPACT)
        assert chk and chk.checked > 0


def test_theorem_b_reduction_to_normal_form():
    # a P(b z1, z2) = a b^d P(z1, z2 / b): a = 3/2^9, b = 2 lands on a' = 3
    cert = check_theorem_b(3 / 2**9, 2, 9, 0)
    assert cert.parameters["branch"] == "ii" and cert.verdict == VERIFIED
    assert verify_witnesses(cert, theorem_b_polynomial(3 / 2**9, 2, 9, 0), COMPACT)


def test_theorem_b_rejects_a_zero():
    with pytest.raises(DomainError):
        check_theorem_b(0, 1, 9, 2)


@settings(max_examples=200, deadline=None)
@given(
    st.complex_numbers(min_magnitude=1e-3, max_magnitude=10, allow_nan=False, allow_infinity=False),
    st.one_of(st.just(0j), st.complex_numbers(min_magnitude=0.1, max_magnitude=3, allow_nan=False, allow_infinity=False)),
    st.integers(1, 12),
)
def test_branch_partition(a, b, d):
    br, _ = classify_branch(a, b, d)
    k = a * b**d
    expected = [b == 0, b != 0 and abs(k - 1) >= 1e-9 and abs(k - 2) >= 1e-9, b != 0 and abs(k - 2) < 1e-9, b != 0 and abs(k - 1) < 1e-9]
    assert sum(expected) == 1
    assert br == ["i", "ii", "iii", "iv"][expected.index(True)]


def test_branch_equality_tolerance():
    assert classify_branch(1 + 5e-10, 1, 9)[0] == "iv"
    assert classify_branch(1 + 5e-9, 1, 9)[0] == "ii"
    assert classify_branch(2 / 3**5, 3, 5)[0] == "iii"


# -- witnesses --------------------------------------------------------------------------


def test_verify_witnesses_examples():
    assert verify_witnesses(_witness_cert([(0, 1, 1j)]), theorem_a_polynomial(9, 0, 1), LOG)
    lam = cmath.exp(2j * math.pi / 6)  # lam^6 = 1 = a
    F = theorem_b_polynomial(1, 0, 6, 1)
    assert verify_witnesses(_witness_cert([(0, lam, 1)]), F, COMPACT)
    fermat = HomPoly(3, {(9, 0, 0): 1, (0, 9, 0): 1, (0, 0, 9): 1})
    bad = verify_witnesses(_witness_cert([(1, 1, 1)]), fermat, COMPACT)
    assert not bad and bad.failures[0]["value"] == [3.0, 0.0]


def test_theorem_a_witness_value_by_hand():
    assert theorem_a_polynomial(9, 0, 1).evaluate((0, 1, 1j)) == pytest.approx(1)


# -- certificates ------------------------------------------------------------------------


@pytest.mark.parametrize("cert", [lambda: check_theorem_a(9, 0.5, 2), lambda: check_theorem_b(1, 1, 9, 2), lambda: check_theorem_a(9, 0, 1)])
def test_certificate_round_trip(cert):
    c = cert()
    text = emit_document(c.to_dict())
    back = Certificate.from_dict(parse_document(text))
    assert emit_document(back.to_dict()) == text


def test_certificate_soundness():
    for c in [check_theorem_a(9, 1, 1), check_theorem_b(1, 0, 6, 1), check_theorem_b(1, 1, 9, 2)]:
        assert c.verdict == VERIFIED
        assert not c.failed_checks
        assert all(r["rigid"] for r in c.case_records)


# -- tower polynomials --------------------------------------------------------------------


def test_build_P1():
    P = build_Pn(1, 5, 2)
    assert P.deg == 5 and len(P.terms) == 3


def test_build_P2_against_sympy():
    d, e = 2, 1
    z0, z1, z2 = sympy.symbols("z0 z1 z2")
    P = lambda x, y: x**d + y**d + x**e * y ** (d - e)
    want = sympy.Poly(sympy.expand(P(P(z0, z1), P(z1, z2))), z0, z1, z2)
    got = build_Pn(2, d, e)
    assert got.deg == 4
    assert {k: int(v) for k, v in got.terms.items()} == {m: int(c) for m, c in zip(want.monoms(), want.coeffs())}


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4), st.integers(0, 4), st.integers(0, 1000))
def test_build_Pn_homogeneous(n, d, e, seed):
    e = min(e, d)
    P = build_Pn(n, d, e)
    rng = np.random.default_rng(seed)
    v = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
    v /= np.linalg.norm(v)
    t = complex(rng.normal(), rng.normal())
    a = P.evaluate(tuple(t * v))
    b = t ** (d**n) * P.evaluate(tuple(v))
    assert abs(a - b) <= 1e-9 * max(1.0, abs(b), P.abs_scale(tuple(t * v)))


def test_build_Pn_cap():
    with pytest.raises(ResourceError):
        build_Pn(3, 4, 1, cap=50)
    with pytest.raises(DomainError):
        build_Pn(0, 3, 1)
    with pytest.raises(DomainError):
        build_Pn(2, 3, 4)


def test_exact_scalar_classification():
    from fractions import Fraction

    # 1/2^9 + 1e-12 is within the float tolerance of branch (iv) scale but exactly off it
    near = Fraction(1, 2**9) + Fraction(1, 10**12)
    assert classify_branch(near, 2, 9)[0] == "ii"
    assert classify_branch(float(near), 2.0, 9)[0] == "iv"
    assert classify_branch(Fraction(2, 3**5), 3, 5)[0] == "iii"
    cert = check_theorem_b(Fraction(1, 512), 2, 9, 2)
    assert cert.parameters["a"] == "1/512" and cert.parameters["ab_pow_d"] == 1
    assert cert.parameters["exact_classification"] and cert.verdict == VERIFIED
