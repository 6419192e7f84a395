import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from fermatcert.errors import DomainError
from fermatcert.polynomial import (
    HomPoly,
    MPoly,
    UniPoly,
    hom_eval,
    hom_partial,
    poly_gcd,
    resultant,
    resultant_is_zero,
    roots_with_multiplicity,
    substitute_ray,
)


def theorem_a_form(d, eps0, eps1):
    return HomPoly(3, {(d, 0, 0): 1, (0, d, 0): 1, (2, 0, d - 2): eps0, (0, 2, d - 2): eps1, (0, 0, d): 1}, d)


def as_set(roots, digits=8):
    return sorted((round(z.real, digits) + 0.0, round(z.imag, digits) + 0.0, m) for z, m in roots)


# -- roots ---------------------------------------------------------------------


def test_roots_of_z2_plus_1():
    assert as_set(roots_with_multiplicity(UniPoly([1, 0, 1]))) == [(0.0, -1.0, 1), (0.0, 1.0, 1)]


def test_roots_of_z9_plus_1():
    roots = roots_with_multiplicity(UniPoly.monomial(9) + 1)
    assert [m for _, m in roots] == [1] * 9
    zs = np.array([z for z, _ in roots])
    assert np.allclose(np.abs(zs), 1.0, atol=1e-12)
    # Vieta: product of roots of z^9 + 1 is (-1)^9 * 1 / 1
    assert abs(np.prod(zs) + 1) < 1e-10


def test_triple_root_clusters():
    p = UniPoly.from_roots([2, 2, 2])
    out = roots_with_multiplicity(p, cluster_eps=1e-6)
    assert len(out) == 1
    z, m = out[0]
    assert m == 3 and abs(z - 2) < 1e-6


def test_close_simple_roots_stay_apart():
    out = roots_with_multiplicity(UniPoly.from_roots([1, 1.00001]))
    assert [m for _, m in out] == [1, 1]


def test_ninefold_root_recovered():
    out = roots_with_multiplicity(UniPoly.from_roots([1] * 9))
    assert len(out) == 1 and out[0][1] == 9
    assert abs(out[0][0] - 1) < 1e-8


def test_zero_roots_factored_out():
    out = roots_with_multiplicity(UniPoly([0, 0, -1, 0, 1]))
    assert as_set(out) == [(-1.0, 0.0, 1), (0.0, 0.0, 2), (1.0, 0.0, 1)]


def test_zero_polynomial_rejected():
    with pytest.raises(DomainError):
        roots_with_multiplicity(UniPoly())


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.floats(-10, 10), st.floats(-10, 10)), min_size=2, max_size=13))
def test_roots_reconstruct_monic(coeffs):
    c = np.array([complex(a, b) for a, b in coeffs])
    if abs(c[-1]) < 1e-3 or np.max(np.abs(c)) < 1e-3:
        return
    p = UniPoly(c)
    roots = roots_with_multiplicity(p)
    assert sum(m for _, m in roots) == p.degree
    rebuilt = UniPoly.from_roots([z for z, m in roots for _ in range(m)])
    target = p.monic()
    scale = np.maximum(np.abs(target.coeffs), 1.0)
    assert np.max(np.abs(rebuilt.coeffs - target.coeffs) / scale) <= 1e-6


# -- resultants and gcd --------------------------------------------------------


@pytest.mark.parametrize(
    "p, q, expected",
    [([-1, 1], [-1, 1], 0), ([-1, 1], [1, 1], 2), ([1, 0, 1], [-1, 0, 1], 4)],
)
def test_resultant_examples(p, q, expected):
    assert abs(resultant(UniPoly(p), UniPoly(q)) - expected) < 1e-10


def test_resultant_matches_sympy():
    z = sp.symbols("z")
    rng = np.random.default_rng(3)
    for _ in range(10):
        a = rng.integers(-5, 6, size=rng.integers(2, 6)).tolist()
        b = rng.integers(-5, 6, size=rng.integers(2, 6)).tolist()
        if a[-1] == 0 or b[-1] == 0:
            continue
        pa = sum(c * z**k for k, c in enumerate(a))
        pb = sum(c * z**k for k, c in enumerate(b))
        exact = complex(sp.resultant(pa, pb, z))
        got = resultant(UniPoly(a), UniPoly(b))
        assert abs(got - exact) <= 1e-8 * max(1.0, abs(exact))


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(-4, 4), min_size=1, max_size=4),
    st.lists(st.integers(-4, 4), min_size=1, max_size=4),
    st.booleans(),
)
def test_resultant_zero_iff_shared_root(ra, rb, share):
    if share:
        rb = rb[:-1] + [ra[0]]
    p, q = UniPoly.from_roots(ra), UniPoly.from_roots(rb)
    shared = any(abs(x - y) < 1e-8 for x in ra for y in rb)
    assert resultant_is_zero(p, q) == shared


def test_gcd_examples():
    g = poly_gcd(UniPoly([-1, 0, 1]), UniPoly([-1, 1]))
    assert g.degree == 1 and abs(g(1.0)) < 1e-12
    g = poly_gcd(UniPoly([0, 0, 0, 1]), UniPoly([0, 0, 1]))
    assert g.degree == 2 and np.allclose(g.monic().coeffs, [0, 0, 1])
    assert poly_gcd(UniPoly([1, 0, 1]), UniPoly([2, 1])).degree == 0


# -- forms -----------------------------------------------------------------------


def test_hom_eval_examples():
    fermat = HomPoly(3, {(9, 0, 0): 1, (0, 9, 0): 1, (0, 0, 9): 1})
    assert hom_eval(fermat, (0, 0, 1)) == 1
    assert abs(hom_eval(theorem_a_form(9, 0, 1), (0, 1, 1j)) - 1) < 1e-14
    assert hom_eval(fermat, (0, 0, 0)) == 0
    with pytest.raises(DomainError):
        hom_eval(fermat, (1, 2))


def test_hom_partial_examples():
    d0 = hom_partial(HomPoly(3, {(9, 0, 0): 1}), 0)
    assert d0.terms == {(8, 0, 0): 9} and d0.deg == 8
    d1 = hom_partial(theorem_a_form(9, 0, 1), 1)
    assert d1.terms == {(0, 8, 0): 9, (0, 1, 7): 2}
    assert hom_partial(HomPoly(3, {(3, 0, 0): 1}), 2).is_zero()


forms = st.integers(1, 12).flatmap(
    lambda d: st.dictionaries(
        st.tuples(st.integers(0, d), st.integers(0, d)).filter(lambda t: t[0] + t[1] <= d).map(
            lambda t: (t[0], t[1], d - t[0] - t[1])
        ),
        st.integers(-20, 20).filter(bool),
        min_size=1,
        max_size=8,
    ).map(lambda terms: HomPoly(3, terms, d))
)


@settings(max_examples=60, deadline=None)
@given(forms)
def test_euler_identity_exact(P):
    z = [MPoly.variable(3, i) for i in range(3)]
    lhs = z[0] * hom_partial(P, 0) + z[1] * hom_partial(P, 1) + z[2] * hom_partial(P, 2)
    assert (lhs - P * P.deg).is_zero()


@settings(max_examples=40, deadline=None)
@given(forms, st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_homogeneity(P, t):
    v = np.array([0.3 + 0.1j, -0.7, 0.5j])
    lhs = hom_eval(P, t * v)
    rhs = t**P.deg * hom_eval(P, v)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, P.abs_scale(t * v))


def test_substitute_ray_examples():
    d = 9
    P = HomPoly(3, {(d, 0, 0): 1, (0, d, 0): 1})
    lam = np.exp(1j * np.pi / d)
    u = substitute_ray(P, 0, 1, lam)
    assert u.max_coeff() < 1e-12
    u = substitute_ray(theorem_a_form(d, 0, 1), 0, 1, 0)
    expect = np.zeros(d + 1, dtype=complex)
    expect[[0, d - 2, d]] = 1
    assert np.allclose(u.coeffs, expect)
    assert u.degree <= d


def test_mpoly_compose_matches_sympy():
    x, y = sp.symbols("x y")
    P = MPoly(2, {(2, 0): 1, (0, 2): 1, (1, 1): 1})
    z = [MPoly.variable(3, i) for i in range(3)]
    out = P.compose([z[0] + z[1], z[1] * 2 - z[2]])
    a, b, c = sp.symbols("a b c")
    ref = sp.Poly(sp.expand((a + b) ** 2 + (2 * b - c) ** 2 + (a + b) * (2 * b - c)), a, b, c)
    assert {k: int(v) for k, v in out.terms.items()} == {k: int(v) for k, v in ref.terms()}
