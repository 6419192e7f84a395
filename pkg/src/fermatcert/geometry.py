"""Plane projective curves: common zeros, singular loci, delta invariants, genus."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConsistencyError, DegenerateCurveError, DomainError
from .polynomial import HomPoly, MPoly, UniPoly, roots_with_multiplicity, sylvester_matrix

__all__ = [
    "ProjPoint2",
    "PlaneCurve",
    "SingularPoint",
    "GeneralPosition",
    "DerivedValue",
    "ChainCheck",
    "GenusReport",
    "bivariate_resultant",
    "common_zeros",
    "general_position3",
    "singular_locus",
    "is_smooth_projective",
    "local_type",
    "delta_quasihom",
    "genus_smooth",
    "genus_noguchi",
    "no_offorigin_singularities",
    "offorigin_singular_points",
    "noguchi_curve",
    "irreducibility_certificate",
    "geometric_genus",
]

POINT_TOL = 1e-6
RESIDUAL_TOL = 1e-7
CHART_MARGIN = 1e-3


@dataclass(frozen=True)
class ProjPoint2:
    """Point of CP^2, scaled so that its largest-modulus coordinate is 1."""

    coords: tuple

    def __post_init__(self):
        v = np.asarray(self.coords, dtype=complex)
        if v.shape != (3,) or not np.all(np.isfinite(v)):
            raise DomainError(f"bad projective coordinates {self.coords!r}")
        a = np.abs(v)
        if a.max() == 0:
            raise DomainError("(0:0:0) is not a projective point")
        # first coordinate within rounding of the maximum, for determinism
        k = int(np.nonzero(a >= a.max() * (1 - 1e-9))[0][0])
        v = v / v[k]
        v[k] = 1.0
        object.__setattr__(self, "coords", tuple(complex(x) for x in v))

    @property
    def array(self):
        return np.array(self.coords, dtype=complex)

    def distance(self, other):
        """sin of the angle between the two lines in C^3."""
        a, b = self.array, other.array
        a = a / np.linalg.norm(a)
        b = b / np.linalg.norm(b)
        return float(math.sqrt(max(0.0, 1.0 - abs(np.vdot(a, b)) ** 2)))

    def key(self, digits=6):
        return tuple((round(z.real, digits) + 0.0, round(z.imag, digits) + 0.0) for z in self.coords)

    def chart_coords(self, k):
        if abs(self.coords[k]) < 1e-300:
            raise DomainError(f"point lies on the line z{k} = 0")
        v = self.array / self.coords[k]
        return tuple(complex(v[i]) for i in range(3) if i != k)


def _dehomogenize(F, k):
    """F with z_k = 1, as a polynomial in the other two coordinates (in order)."""
    keep = [i for i in range(3) if i != k]
    t = {}
    for e, c in F.terms.items():
        f = (e[keep[0]], e[keep[1]])
        t[f] = t.get(f, 0) + c
    return MPoly(2, t)


def _lift(k, x, y):
    v = [0j, 0j, 0j]
    keep = [i for i in range(3) if i != k]
    v[keep[0]], v[keep[1]], v[k] = x, y, 1.0
    return ProjPoint2(tuple(v))


class PlaneCurve:
    """Zero set of a nonzero ternary form, with its three affine charts."""

    def __init__(self, defining, name=None):
        if not isinstance(defining, HomPoly) or defining.nvars != 3:
            raise DomainError("a plane curve needs a ternary homogeneous form")
        if defining.is_zero():
            raise DomainError("the zero form does not define a curve")
        self.defining = defining
        self.name = name
        self._charts = {}

    @property
    def deg(self):
        return self.defining.deg

    def chart(self, k):
        if k not in self._charts:
            self._charts[k] = _dehomogenize(self.defining, k)
        return self._charts[k]

    @property
    def charts(self):
        return tuple(self.chart(k) for k in range(3))

    def __repr__(self):
        return f"PlaneCurve({self.name or self.defining!r})"


@dataclass
class SingularPoint:
    location: ProjPoint2
    local_type: str
    delta: Fraction | None = None
    pq: tuple | None = None
    branches: int | None = None
    chart: int | None = None
    chart_coords: tuple | None = None


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------


def _coeff_matrix(P, var):
    """A[k, j] with P = sum_k (sum_j A[k, j] x^j) var^k, x the other variable."""
    other = 1 - var
    A = np.zeros((max(P.degree_in(var), 0) + 1, max(P.degree_in(other), 0) + 1), dtype=complex)
    for e, c in P.terms.items():
        A[e[var], e[other]] += c
    return A


def bivariate_resultant(a, b, var):
    """res_var(a, b) as a UniPoly in the other variable, or None if it vanishes identically.

    The determinant of the Sylvester matrix (formal degrees in ``var``) is
    sampled on the unit circle and interpolated by FFT.
    """
    m, n = a.degree_in(var), b.degree_in(var)
    if m <= 0 and n <= 0:
        raise DomainError("neither polynomial involves the eliminated variable")
    bound = max(a.total_degree, 0) * max(b.total_degree, 0)
    N = bound + 1
    xs = np.exp(2j * np.pi * np.arange(N) / N)
    A, B = _coeff_matrix(a, var), _coeff_matrix(b, var)
    av = A @ (xs[None, :] ** np.arange(A.shape[1])[:, None])  # (m+1, N)
    bv = B @ (xs[None, :] ** np.arange(B.shape[1])[:, None])
    size = m + n
    S = np.zeros((N, size, size), dtype=complex)
    for i in range(n):
        S[:, i, i : i + m + 1] = av[::-1].T
    for i in range(m):
        S[:, n + i, i : i + n + 1] = bv[::-1].T
    vals = np.linalg.det(S)
    hadamard = np.linalg.norm(av, axis=0) ** n * np.linalg.norm(bv, axis=0) ** m
    if np.max(np.abs(vals)) <= 1e-10 * np.max(hadamard):
        return None
    c = np.fft.fft(vals) / N
    c[np.abs(c) <= 1e-12 * np.max(np.abs(c))] = 0
    return UniPoly(c)


def _restrict(P, var, value):
    """P with the other variable set to ``value``: a UniPoly in ``var``."""
    other = 1 - var
    return P.substitute({other: value}).to_univariate(var)


def _jacobian(polys, grads, x, y):
    r = np.array([p.evaluate((x, y)) for p in polys])
    J = np.array([[g[0].evaluate((x, y)), g[1].evaluate((x, y))] for g in grads])
    return r, J


def _polish(polys, x, y, steps=30):
    grads = [(p.partial(0), p.partial(1)) for p in polys]
    r, J = _jacobian(polys, grads, x, y)
    best = np.linalg.norm(r)
    for _ in range(steps):
        step, *_ = np.linalg.lstsq(J, -r, rcond=1e-12)
        nx, ny = x + step[0], y + step[1]
        nr, nJ = _jacobian(polys, grads, nx, ny)
        nn = np.linalg.norm(nr)
        if not nn < best:
            break
        x, y, r, J, best = nx, ny, nr, nJ, nn
        if abs(step[0]) + abs(step[1]) <= 1e-15 * (1 + abs(x) + abs(y)):
            break
    return complex(x), complex(y)


def _scale(P):
    return P.max_coeff() * max(len(P.terms), 1)


def _rel_residual(P, pt):
    """|P(pt)| relative to the no-cancellation size of P at pt."""
    v = abs(P.evaluate(tuple(pt)))
    scale = float(P.abs_scale(tuple(pt)))
    return v / scale if scale > 0 else (0.0 if v == 0 else math.inf)


def _coprime_pair(polys):
    """(i, j, var, res_var) for the first pair without a common factor.

    Falls back to a pair whose resultant in one variable is not identically
    zero; returns None when every resultant vanishes.
    """
    fallback = None
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            res = {}
            for var in (1, 0):
                if polys[i].degree_in(var) <= 0 and polys[j].degree_in(var) <= 0:
                    continue
                res[var] = bivariate_resultant(polys[i], polys[j], var)
            good = [v for v, R in res.items() if R is not None]
            if good and len(good) == len(res):
                return i, j, good[0], res[good[0]]
            if good and fallback is None:
                fallback = (i, j, good[0], res[good[0]])
    return fallback


def _affine_common_zeros(polys, seed=0, tol=RESIDUAL_TOL, radius=1 + CHART_MARGIN):
    """Common zeros in the closed polydisc of the given bivariate polynomials.

    Returns None when no pair has a resultant that is not identically zero.
    """
    polys = [p for p in polys if not p.is_zero()]
    if any(p.is_constant() for p in polys):
        return []
    if len(polys) == 1:
        raise DomainError("a single curve has infinitely many points")
    elim = _coprime_pair(polys)
    if elim is None:
        return None
    i, j, var, R = elim
    other = 1 - var
    order = [polys[i], polys[j]] + [p for k, p in enumerate(polys) if k not in (i, j)]
    found = []
    xs = [] if R.degree <= 0 else [x for x, _ in roots_with_multiplicity(R, seed=seed)]
    for x0 in xs:
        if abs(x0) > radius:
            continue
        u = None
        for src in order:
            r = _restrict(src, var, x0).trim(1e-13)
            if r.is_zero():
                continue
            u = r
            break
        if u is None:
            return None
        if u.degree < 1:
            continue
        for y0, _ in roots_with_multiplicity(u, seed=seed):
            if abs(y0) > radius + 0.5:
                continue
            pt = [0j, 0j]
            pt[other], pt[var] = x0, y0
            if any(abs(p.evaluate(tuple(pt))) > 1e-4 * _scale(p) for p in polys):
                continue
            x, y = _polish(polys, *pt)
            if abs(x - pt[0]) + abs(y - pt[1]) > 1e-4 * (1 + abs(x) + abs(y)):
                continue
            if max(abs(x), abs(y)) > radius:
                continue
            ok = all(abs(p.evaluate((x, y))) <= tol * _scale(p) and _rel_residual(p, (x, y)) <= RESIDUAL_TOL
                     for p in polys)
            if ok:
                found.append((x, y))
    return found


def _dedupe(points, tol=POINT_TOL):
    out = []
    for p in points:
        if all(p.distance(q) > tol for q in out):
            out.append(p)
    out.sort(key=lambda p: p.key())
    return out


def common_zeros(forms, seed=0):
    """Projective common zeros of ternary forms (finite case).

    Raises DegenerateCurveError when the elimination shows a common
    positive-dimensional component.
    """
    forms = [F for F in forms if not F.is_zero()]
    if not forms:
        raise DegenerateCurveError("all forms vanish identically")
    pts = []
    for k in range(3):
        charts = [_dehomogenize(F, k) for F in forms]
        z = _affine_common_zeros(charts, seed=seed)
        if z is None:
            raise DegenerateCurveError(f"forms share a component (chart z{k} = 1)")
        pts.extend((_lift(k, x, y), k, (x, y)) for x, y in z)
    out = []
    for p, k, c in sorted(pts, key=lambda t: t[0].key()):
        if all(p.distance(q) > POINT_TOL for q, _, _ in out):
            out.append((p, k, c))
    return out


# ---------------------------------------------------------------------------
# general position
# ---------------------------------------------------------------------------


@dataclass
class GeneralPosition:
    holds: bool
    common_zero: ProjPoint2 | None = None
    evidence: list = field(default_factory=list)

    def __bool__(self):
        return self.holds


def general_position3(D0, D1, D2, seed=0):
    """Whether the three forms have no common zero in CP^2."""
    forms = [D0, D1, D2]
    for F in forms:
        if not isinstance(F, HomPoly) or F.nvars != 3:
            raise DomainError("general_position3 needs ternary forms")
    if any(not F.is_zero() and F.deg == 0 for F in forms):
        return GeneralPosition(True, evidence=[{"reason": "a nonzero constant form"}])
    live = [F for F in forms if not F.is_zero()]
    zero_idx = [i for i, F in enumerate(forms) if F.is_zero()]
    if len(live) <= 1:
        # a single curve (or the whole plane) is nonempty
        F = live[0] if live else None
        pt = _point_on(F, seed) if F is not None else ProjPoint2((0, 0, 1))
        return GeneralPosition(False, pt, [{"reason": "forms vanish identically", "zero_forms": zero_idx}])
    evidence = []
    try:
        zs = common_zeros(live, seed=seed)
    except DegenerateCurveError:
        pt = _shared_component_point(live, seed)
        return GeneralPosition(False, pt, [{"reason": "shared component"}])
    for k in range(3):
        charts = [_dehomogenize(F, k) for F in live]
        evidence.append({"chart": k, "degrees": [c.total_degree for c in charts]})
    if zs:
        return GeneralPosition(False, zs[0][0], evidence + [{"reason": "common zero", "zero_forms": zero_idx}])
    return GeneralPosition(True, None, evidence)


def _point_on(F, seed=0):
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
    # restrict to the line (s : a s + b t : t)... use z = (1, a + b t, t)
    for k in range(3):
        f = _dehomogenize(F, k)
        if f.is_constant():
            continue
        u = f.substitute({0: a}).to_univariate(1) if f.degree_in(1) > 0 else None
        if u is not None and u.degree >= 1:
            y = roots_with_multiplicity(u, seed=seed)[0][0]
            return _lift(k, a, y)
    return ProjPoint2((1, 0, 0)) if abs(F.evaluate((1, 0, 0))) < 1e-12 else ProjPoint2((0, 1, 0))


def _shared_component_point(forms, seed=0):
    pts = []
    for F in forms:
        try:
            pts.append(_point_on(F, seed))
        except Exception:  # pragma: no cover - best-effort evidence only
            continue
    for p in pts:
        if all(abs(G.evaluate(p.coords)) <= RESIDUAL_TOL * _scale(G) for G in forms):
            return p
    return None


# ---------------------------------------------------------------------------
# singularities
# ---------------------------------------------------------------------------


def _taylor(f, x0, y0, chop=1e-8):
    """Coefficients a[(i, j)] of f(x0 + u, y0 + v)."""
    out = {}
    for (a, b), c in f.terms.items():
        for i in range(a + 1):
            ci = math.comb(a, i) * x0 ** (a - i) if a - i else math.comb(a, i)
            for j in range(b + 1):
                cj = math.comb(b, j) * y0 ** (b - j) if b - j else math.comb(b, j)
                out[(i, j)] = out.get((i, j), 0) + c * ci * cj
    m = max((abs(v) for v in out.values()), default=0.0)
    return {k: complex(v) for k, v in out.items() if abs(v) > chop * m}


def _newton_polygon_type(coef):
    """(p, q, branches) if the local form is semi-quasi-homogeneous, else None."""
    pure_u = [i for (i, j) in coef if j == 0]
    pure_v = [j for (i, j) in coef if i == 0]
    if not pure_u or not pure_v:
        return None
    p, q = min(pure_u), min(pure_v)
    if p == 0 or q == 0:
        return None
    for (i, j) in coef:
        if i * q + j * p < p * q:
            return None
    g = math.gcd(p, q)
    pp, qq = p // g, q // g
    edge = np.zeros(g + 1, dtype=complex)
    for (i, j), c in coef.items():
        if i * q + j * p == p * q:
            edge[j // qq] += c
    roots = roots_with_multiplicity(UniPoly(edge), cluster_eps=1e-6)
    if any(m > 1 for _, m in roots) or sum(m for _, m in roots) != g:
        return None
    return p, q, g


def local_type(f, x0, y0, seed=0, tries=3):
    """Classify the singularity of the affine curve f = 0 at (x0, y0)."""
    coef = _taylor(f, x0, y0)
    if (0, 0) in coef and abs(coef[(0, 0)]) > 1e-6:
        return "smooth-check-failure", None
    if (1, 0) in coef or (0, 1) in coef:
        lin = max(abs(coef.get((1, 0), 0)), abs(coef.get((0, 1), 0)))
        if lin > 1e-6 * max(abs(v) for v in coef.values()):
            return "smooth-check-failure", None
    t = _newton_polygon_type(coef)
    if t is not None:
        return "quasi-homogeneous", t
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        alpha, beta = rng.normal(size=2) + 1j * rng.normal(size=2)
        # substitute x = x0 + u + alpha v, y = y0 + beta u + v
        U = MPoly(2, {(1, 0): 1, (0, 1): alpha})
        V = MPoly(2, {(1, 0): beta, (0, 1): 1})
        g = f.compose([U + x0, V + y0])
        t = _newton_polygon_type(_taylor(g, 0, 0))
        if t is not None:
            return "quasi-homogeneous", t
    return "other", None


def singular_locus(C, seed=0):
    """All singular points of a plane curve (empty list iff smooth)."""
    if C.deg < 2:
        if C.deg < 1:
            raise DomainError("constant form")
        return []
    F = C.defining
    out = []
    for k in range(3):
        f = C.chart(k)
        polys = [f, f.partial(0), f.partial(1)]
        z = _affine_common_zeros(polys, seed=seed)
        if z is None:
            raise DegenerateCurveError(f"singular locus is positive dimensional (chart z{k} = 1)")
        for x, y in z:
            loc = _lift(k, x, y)
            if any(loc.distance(s.location) <= POINT_TOL for s in out):
                continue
            v = loc.array
            if not all(_rel_residual(G, v) <= RESIDUAL_TOL for G in (F, F.partial(0), F.partial(1), F.partial(2))):
                continue
            tag, t = local_type(f, x, y, seed=seed)
            sp = SingularPoint(loc, tag, chart=k, chart_coords=(x, y))
            if t is not None:
                p, q, g = t
                sp.pq = (p, q)
                sp.branches = g
                sp.delta = delta_quasihom(p, q)
            out.append(sp)
    out.sort(key=lambda s: s.location.key())
    return out


def is_smooth_projective(C, seed=0):
    return not singular_locus(C, seed=seed)


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------


def delta_quasihom(p, q):
    """delta invariant of X^p - Y^q = 0 at the origin."""
    if p < 1 or q < 1:
        raise DomainError("exponents must be positive")
    return Fraction((p - 1) * (q - 1) + math.gcd(p, q) - 1, 2)


def genus_smooth(d):
    """Genus of a smooth plane curve of degree d."""
    if d < 1:
        raise DomainError("degree must be positive")
    return Fraction((d - 1) * (d - 2), 2)


@dataclass
class DerivedValue:
    value: Fraction
    trace: dict

    def __eq__(self, other):
        if isinstance(other, DerivedValue):
            return self.value == other.value
        return self.value == other

    def __int__(self):
        return int(self.value)


def genus_noguchi(d, e):
    """Genus of z0^d + z0^e z1^(d-e) - z1^e z2^(d-e) - z2^d, computed two ways."""
    if not (e > 0 and d > 2 * e + 3):
        raise DomainError(f"need e > 0 and d > 2e + 3, got d={d}, e={e}")
    if math.gcd(d, e) != 1:
        raise DomainError(f"need gcd(d, e) = 1, got gcd({d}, {e}) = {math.gcd(d, e)}")
    closed = Fraction(d * d - (e + 2) * d + e * e + 1, 2)
    delta = delta_quasihom(e, d - e)
    route = genus_smooth(d) - delta
    if closed != route:
        raise ConsistencyError(f"genus routes disagree: {closed} vs {route}")
    trace = {
        "closed_form": closed,
        "genus_smooth": genus_smooth(d),
        "delta": delta,
        "delta_route": route,
        "lower_bound": Fraction(3 * e * e + 5 * e + 4, 2),
    }
    return DerivedValue(closed, trace)


@dataclass
class ChainCheck:
    holds: bool
    lhs: float
    middle: float
    rhs: float
    guard: float = 1e-9

    def __bool__(self):
        return self.holds


def no_offorigin_singularities(d, e, guard=1e-9):
    """Inequality chain ruling out singular points with XY != 0."""
    if not (e > 0 and d > 2 * e + 3):
        raise DomainError(f"need e > 0 and d > 2e + 3, got d={d}, e={e}")
    t = d / e
    lhs = (t - 1) ** 2 * t ** (-1 - e / (d - e))
    middle = ((e + 3) / (2 * e + 3)) ** 2
    rhs = (1 + e / (d - e)) ** (-t)
    return ChainCheck(rhs + guard < middle and middle + guard < lhs, lhs, middle, rhs, guard)


def noguchi_curve(d, e, a=1):
    """z0^d + z0^e z1^(d-e) - a z1^e z2^(d-e) - a z2^d."""
    t = {}
    for exps, c in (((d, 0, 0), 1), ((e, d - e, 0), 1), ((0, e, d - e), -a), ((0, 0, d), -a)):
        t[exps] = t.get(exps, 0) + c
    return PlaneCurve(HomPoly(3, t, d), name=f"noguchi({d},{e})")


def offorigin_singular_points(d, e, seed=0):
    """Singular points of the affine curve X^d + X^e - Y^(d-e) - Y^d with XY != 0."""
    C = noguchi_curve(d, e)
    pts = []
    for s in singular_locus(C, seed=seed):
        v = s.location.array
        if abs(v[1]) > 1e-12:
            x, y = v[0] / v[1], v[2] / v[1]
            if abs(x) > POINT_TOL and abs(y) > POINT_TOL:
                pts.append(s)
    return pts


# ---------------------------------------------------------------------------
# irreducibility and geometric genus
# ---------------------------------------------------------------------------


def _binary_roots(form, i, j):
    """Roots of a binary form in z_i, z_j as (ratio, multiplicity); None means z_j = 0."""
    u = np.zeros(max(form.deg, 0) + 1, dtype=complex)
    for e, c in form.terms.items():
        u[e[i]] += c
    p = UniPoly(u)
    out = roots_with_multiplicity(p) if p.degree >= 1 else []
    at_inf = form.deg - p.degree
    if at_inf:
        out.append((None, at_inf))
    return out


def irreducibility_certificate(C, sing=None, seed=0):
    """(True, reason) when irreducibility is certified, (None, reason) otherwise."""
    if sing is None:
        sing = singular_locus(C, seed=seed)
    if all(s.branches == 1 for s in sing):
        return True, "every singular point is unibranch" if sing else "smooth"
    F = C.defining
    for k in range(3):
        if F.degree_in(k) != 2 or any(e[k] == 1 for e in F.terms):
            continue
        i, j = [m for m in range(3) if m != k]
        A = HomPoly(3, {e[:k] + (0,) + e[k + 1 :]: c for e, c in F.terms.items() if e[k] == 2}, F.deg - 2)
        B = HomPoly(3, {e: c for e, c in F.terms.items() if e[k] == 0}, F.deg)
        if B.is_zero():
            continue
        ra, rb = _binary_roots(A, i, j), _binary_roots(B, i, j)
        shared = False
        for x, _ in ra:
            for y, _ in rb:
                if (x is None and y is None) or (x is not None and y is not None and abs(x - y) <= POINT_TOL):
                    shared = True
        if shared:
            continue
        if any(m % 2 for _, m in ra + rb):
            return True, f"quadratic in z{k} with coprime coefficients and non-square discriminant"
    return None, "no certificate found"


@dataclass
class GenusReport:
    degree: int
    arithmetic_genus: Fraction
    delta_total: Fraction | None
    geometric_genus: Fraction | None
    irreducible: bool | None
    irreducibility_reason: str
    singular_points: list


def geometric_genus(C, seed=0):
    sing = singular_locus(C, seed=seed)
    pa = genus_smooth(C.deg)
    deltas = [s.delta for s in sing]
    total = None if any(dl is None for dl in deltas) else sum(deltas, Fraction(0))
    irr, why = irreducibility_certificate(C, sing, seed=seed)
    geo = pa - total if (total is not None and irr) else None
    return GenusReport(C.deg, pa, total, geo, irr, why, sing)
