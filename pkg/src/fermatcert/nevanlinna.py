"""Numerical value-distribution functionals on the disc of radius r.

Counting functions are integrated in closed form over the step function
n(t); order and proximity functions use trapezoidal quadrature on the circle
with node doubling.  Everything is in the max-norm normalization.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.special import logsumexp
from scipy.stats import norm, qmc

from .entire import EntireFn, pullback
from .errors import ConsistencyError, ContourError, DomainError, NumericError
from .geometry import general_position3
from .polynomial import HomPoly, roots_with_multiplicity

__all__ = [
    "EffectiveDivisor",
    "HoloMap",
    "RGrid",
    "truncated_degree",
    "truncated_counting",
    "count_zeros_argument_principle",
    "winding_number",
    "locate_zeros",
    "zero_divisor",
    "counting_map",
    "order_function",
    "proximity",
    "verify_fmt",
    "verify_cartan_smt",
    "verify_pullback_order",
    "sphere_sandwich",
    "write_trace",
    "NODE_CAP",
]

MERGE_TOL = 1e-9
CONTOUR_REL_TOL = 1e-10
QUAD_TOL = 1e-7
NODE_CAP = 2**20
ZERO_BOX = 1e-6
JITTER = 1e-4
PHASE_STEP = math.pi / 3


# ---------------------------------------------------------------------------
# divisors and counting functions
# ---------------------------------------------------------------------------


@dataclass
class EffectiveDivisor:
    """Finite formal sum of points of C with positive multiplicities."""

    support: list = field(default_factory=list)

    def __post_init__(self):
        merged = []
        for a, k in self.support:
            a, k = complex(a), int(k)
            if k < 1:
                raise DomainError(f"multiplicity must be positive, got {k}")
            for i, (b, j) in enumerate(merged):
                if abs(a - b) <= MERGE_TOL * max(1.0, abs(a)):
                    merged[i] = (b, j + k)
                    break
            else:
                merged.append((a, k))
        merged.sort(key=lambda t: (abs(t[0]), t[0].real, t[0].imag))
        self.support = merged

    @property
    def degree(self):
        return sum(k for _, k in self.support)

    def moduli(self):
        return np.array([abs(a) for a, _ in self.support])


def _cap(k, m):
    return k if m is None or m == math.inf else min(int(m), k)


def truncated_degree(E, r, m=None):
    """Number of points in |z| < r, each counted min(m, multiplicity) times."""
    if r <= 0:
        raise DomainError("radius must be positive")
    return sum(_cap(k, m) for a, k in E.support if abs(a) < r)


def truncated_counting(E, r, m=None):
    """Integral from 1 to r of (n(t) - n(0)) / t, evaluated exactly."""
    if r <= 1:
        raise DomainError("counting functions need r > 1")
    total = 0.0
    for a, k in E.support:
        mod = abs(a)
        if 0 < mod < r:
            total += _cap(k, m) * math.log(r / max(mod, 1.0))
    return total


# ---------------------------------------------------------------------------
# argument principle
# ---------------------------------------------------------------------------


def _log_scale(h, z):
    """log of sum_k |p_k|(|z|) exp(Re q_k(z)), the no-cancellation size of h."""
    logs = []
    for p, q in h.terms:
        with np.errstate(divide="ignore"):
            logs.append(np.log(p.abs_scale(z)) + np.real(q(z)))
    return logsumexp(np.stack(logs), axis=0)


def _phase_speed(h, zabs):
    """Crude bound on |d arg h / d z| from the exponents and degrees."""
    s = 0.0
    for p, q in h.terms:
        dq = q.deriv()
        s = max(s, float(np.sum(np.abs(dq.coeffs) * zabs ** np.arange(len(dq.coeffs)))) if len(dq.coeffs) else 0.0)
        s = max(s, p.degree / max(zabs, 1e-12))
    return s


def winding_number(h, path, length, rel_tol=CONTOUR_REL_TOL, max_points=NODE_CAP):
    """Winding of h around 0 along the closed path t -> path(t), t in [0, 1].

    ``length`` bounds the arc length and |z| on the path (used for the initial
    sampling density).  Raises ContourError when h nearly vanishes on the path.
    """
    if h.is_zero():
        raise DomainError("winding number of the zero function")
    zmax, arc = length
    n0 = int(min(max_points // 4, 64 + 8 * _phase_speed(h, zmax) * arc))
    t = np.linspace(0.0, 1.0, n0 + 1)
    dh = h.deriv()
    for _ in range(60):
        z = path(t)
        s, m = h.scaled(z)
        rel = np.exp(h.log_abs(z) - _log_scale(h, z))
        k = int(np.argmin(rel))
        if rel[k] < rel_tol:
            raise ContourError(f"integrand nearly vanishes at z = {z[k]:.6g}", distance=float(rel[k]))
        phi = np.angle(s)
        dphi = np.angle(np.exp(1j * np.diff(phi)))
        # |h'/h| |dz| estimates the phase change per segment; it catches zeros
        # close to the path that the sampled phase alone would alias
        if dh.is_zero():
            turn = np.zeros(len(t) - 1)
        else:
            sd, md = dh.scaled(z)
            logder = np.abs(sd / s) * np.exp(md - m)
            turn = np.maximum(logder[:-1], logder[1:]) * np.abs(np.diff(z))
        bad = (np.abs(dphi) > PHASE_STEP) | (turn > PHASE_STEP)
        if not bad.any():
            return int(round(float(np.sum(dphi)) / (2 * math.pi)))
        if len(t) + int(bad.sum()) > max_points:
            break
        gaps = np.diff(t)[bad]
        if gaps.min() < 1e-15:
            raise ContourError("phase jump does not resolve; zero on the contour", distance=0.0)
        mids = t[:-1][bad] + gaps / 2
        t = np.sort(np.concatenate([t, mids]))
    raise ContourError("phase tracking exceeded the sample cap")


def count_zeros_argument_principle(h, r):
    """Zeros of h in |z| < r with multiplicity, via the winding along |z| = r."""
    if r <= 0:
        raise DomainError("radius must be positive")
    try:
        return winding_number(h, lambda t: r * np.exp(2j * math.pi * t), (r, 2 * math.pi * r))
    except ContourError as exc:
        exc.radius = r
        raise


def _rect_path(x0, x1, y0, y1):
    corners = np.array([x0 + 1j * y0, x1 + 1j * y0, x1 + 1j * y1, x0 + 1j * y1, x0 + 1j * y0])

    def path(t):
        u = np.asarray(t) * 4
        k = np.minimum(u.astype(int), 3)
        f = u - k
        return corners[k] + (corners[k + 1] - corners[k]) * f

    return path


def _rect_winding(h, x0, x1, y0, y1):
    zmax = max(abs(complex(x, y)) for x in (x0, x1) for y in (y0, y1))
    return winding_number(h, _rect_path(x0, x1, y0, y1), (zmax, 2 * ((x1 - x0) + (y1 - y0))))


def locate_zeros(h, R, box=ZERO_BOX, seed=0):
    """Zeros of h in the square |Re z|, |Im z| <= ~R, localized to boxes of side < ``box``.

    Each returned (center, k) stands for k zeros (with multiplicity) inside a
    box around ``center``.
    """
    rng = np.random.default_rng(seed)
    for _ in range(8):
        half = R * (1 + 0.013 * rng.random()) + 0.37
        try:
            total = _rect_winding(h, -half, half, -half, half)
            break
        except ContourError:
            continue
    else:
        raise ContourError("cannot place the outer box", radius=R)
    out = []
    stack = [(-half, half, -half, half, total)]
    while stack:
        x0, x1, y0, y1, k = stack.pop()
        if k == 0:
            continue
        if max(x1 - x0, y1 - y0) < box:
            out.append((complex((x0 + x1) / 2, (y0 + y1) / 2), k))
            continue
        for _attempt in range(8):
            sx = (x0 + x1) / 2 + (x1 - x0) * 0.02 * (rng.random() - 0.5)
            sy = (y0 + y1) / 2 + (y1 - y0) * 0.02 * (rng.random() - 0.5)
            kids = [(x0, sx, y0, sy), (sx, x1, y0, sy), (x0, sx, sy, y1), (sx, x1, sy, y1)]
            try:
                counts = [_rect_winding(h, *c) for c in kids]
            except ContourError:
                continue
            if sum(counts) == k:
                break
        else:
            raise ContourError(f"box subdivision failed near {(x0 + x1) / 2:+.3g}{(y0 + y1) / 2:+.3g}i")
        stack.extend((*c, n) for c, n in zip(kids, counts) if n)
    return out


def zero_divisor(h, R, seed=0):
    """Zero divisor of h inside |z| < R (exact roots when h = p * exp(q))."""
    if h.is_zero():
        raise DomainError("the pullback vanishes identically")
    if len(h.terms) == 1:
        p = h.terms[0][0]
        if p.degree <= 0:
            return EffectiveDivisor([])
        pts = roots_with_multiplicity(p, seed=seed)
    else:
        pts = locate_zeros(h, R, seed=seed)
    return EffectiveDivisor([(a, k) for a, k in pts if abs(a) < R])


# ---------------------------------------------------------------------------
# maps and functionals
# ---------------------------------------------------------------------------


@dataclass
class HoloMap:
    """Holomorphic map C -> CP^2 given by entire component functions."""

    components: tuple
    reduced: bool = False

    def __post_init__(self):
        comps = tuple(c if isinstance(c, EntireFn) else EntireFn.constant(c) for c in self.components)
        if len(comps) != 3:
            raise DomainError("a map to CP^2 needs three components")
        if all(c.is_zero() for c in comps):
            raise DomainError("all components vanish identically")
        self.components = comps
        if self.reduced:
            self._check_reduced()

    def _check_reduced(self, radius=10.0):
        for c in self.components:
            if len(c.terms) == 1:
                p = c.terms[0][0]
                if p.degree <= 0:
                    return
                for a, _ in roots_with_multiplicity(p):
                    if abs(a) <= radius and max(abs(o(a)) for o in self.components) < 1e-9:
                        raise DomainError(f"components share the zero {a:.6g}")
                return

    def log_norm(self, z):
        """log max_i |f_i(z)|."""
        logs = [c.log_abs(z) for c in self.components if not c.is_zero()]
        return np.max(np.stack([np.asarray(x, dtype=float) for x in logs]), axis=0)

    def __call__(self, z):
        return np.stack([np.asarray(c(z)) if not c.is_zero() else np.zeros_like(np.asarray(z, dtype=complex)) for c in self.components])


@dataclass
class RGrid:
    radii: list
    quadrature_nodes: int = 64

    def __post_init__(self):
        r = [float(x) for x in self.radii]
        if not r or any(x <= 1 for x in r) or any(b <= a for a, b in zip(r, r[1:])):
            raise DomainError("radii must be increasing and > 1")
        if self.quadrature_nodes < 64:
            raise DomainError("need at least 64 quadrature nodes")
        self.radii = r

    @classmethod
    def geometric(cls, r0, r1, n, nodes=64):
        return cls(list(np.geomspace(r0, r1, n)), nodes)

    def avoiding(self, E, gap=JITTER):
        """Radii moved by +-gap away from divisor moduli closer than gap; returns (radii, jitter)."""
        mods = E.moduli() if E is not None else np.array([])
        out, jit = [], []
        for r in self.radii:
            dr = 0.0
            if mods.size and np.min(np.abs(mods - r)) < gap:
                for cand in (gap, -gap, 2 * gap, -2 * gap):
                    if np.min(np.abs(mods - (r + cand))) >= gap / 2:
                        dr = cand
                        break
            out.append(r + dr)
            jit.append(dr)
        return out, jit


def _periodic_mean(fn, nodes, tol=QUAD_TOL, cap=None):
    """Trapezoid mean of a 2 pi periodic function, doubling nodes until stable."""
    cap = NODE_CAP if cap is None else cap
    n = nodes
    theta = 2 * math.pi * np.arange(n) / n
    est = float(np.mean(fn(theta)))
    while True:
        if 2 * n > cap:
            raise NumericError(f"quadrature did not settle below {cap} nodes", residual=None)
        mids = 2 * math.pi * (np.arange(n) + 0.5) / n
        new = 0.5 * (est + float(np.mean(fn(mids))))
        n *= 2
        if abs(new - est) < tol:
            return new, n
        est = new


def order_function(f, r, nodes=64):
    """T_f(r): circle average of log max_i |f_i|."""
    if r <= 1:
        raise DomainError("order function needs r > 1")
    val, _ = _periodic_mean(lambda th: f.log_norm(r * np.exp(1j * th)), nodes)
    return val


def _qmax(Q):
    return max(abs(complex(c)) for c in Q.terms.values())


def proximity(f, Q, r, nodes=64, h=None):
    """m_f(r, D) for the divisor D = {Q = 0}."""
    if r <= 1:
        raise DomainError("proximity needs r > 1")
    h = pullback(Q, f.components) if h is None else h
    if h.is_zero():
        raise DomainError("f(C) lies inside the divisor")
    d = Q.deg
    lq = math.log(_qmax(Q))

    def integrand(th):
        z = r * np.exp(1j * th)
        lh = h.log_abs(z)
        if np.any(~np.isfinite(lh)):
            raise ContourError("pullback vanishes on the circle", radius=r, distance=0.0)
        return d * f.log_norm(z) + lq - lh

    val, _ = _periodic_mean(integrand, nodes)
    floor = -math.log(math.comb(d + 2, 2))
    if val < floor - 1e-6:
        raise ConsistencyError(f"proximity {val} below the bound {floor}")
    return val


def counting_map(f, Q, r, m=None, divisor=None, seed=0):
    """N_f^[m](r, D) through the zero divisor of Q o f."""
    if divisor is None:
        h = pullback(Q, f.components)
        divisor = zero_divisor(h, r, seed=seed)
    return truncated_counting(divisor, r, m)


# ---------------------------------------------------------------------------
# verifiers
# ---------------------------------------------------------------------------


def _oscillation(values):
    v = np.asarray(values, dtype=float)
    return float(v.max() - v.min()) if v.size else 0.0


@dataclass
class TraceReport:
    header: tuple
    rows: list
    passed: bool
    summary: dict = field(default_factory=dict)
    jitter: list = field(default_factory=list)

    def column(self, name):
        i = self.header.index(name)
        return [row[i] for row in self.rows]


def verify_fmt(f, Q, grid, seed=0):
    """m + N - d T along the grid; PASS iff it is flat (< 0.5) on the upper half."""
    h = pullback(Q, f.components)
    if h.is_zero():
        raise DomainError("f(C) lies inside the divisor")
    E = zero_divisor(h, grid.radii[-1] * 1.01, seed=seed)
    radii, jitter = grid.avoiding(E)
    d = Q.deg
    rows = []
    for r in radii:
        T = order_function(f, r, grid.quadrature_nodes)
        N = truncated_counting(E, r)
        m = proximity(f, Q, r, grid.quadrature_nodes, h=h)
        rows.append((r, T, N, m, m + N - d * T))
    dev = [row[4] for row in rows]
    osc = _oscillation(dev[len(dev) // 2:])
    summary = {
        "max_abs_deviation": float(np.max(np.abs(dev))),
        "oscillation_upper_half": osc,
        "oscillation": _oscillation(dev),
        "divisor_degree": E.degree,
    }
    return TraceReport(("r", "T", "N", "m", "deviation"), rows, osc < 0.5, summary, jitter)


def _linearly_nondegenerate(f, samples=12, seed=0):
    rng = np.random.default_rng(seed)
    z = 0.8 * np.exp(2j * math.pi * rng.random(samples)) * rng.random(samples) ** 0.5
    M = f(z)
    M = M / np.maximum(np.linalg.norm(M, axis=0), 1e-300)
    s = np.linalg.svd(M, compute_uv=False)
    return s[-1] > 1e-8 * s[0]


def verify_cartan_smt(f, hyperplanes, grid, truncation=2, allowance=3.0, seed=0):
    """(q - 2) T - sum_i N^[2](H_i) along the grid.

    PASS iff the fitted eps = max_r (margin(r) - allowance * log r)^+ / T(r) is at most 0.1.
    """
    H = list(hyperplanes)
    if len(H) < 4:
        raise DomainError("need at least 4 hyperplanes in CP^2")
    vecs = []
    for L in H:
        if not isinstance(L, HomPoly) or L.deg != 1 or L.nvars != 3:
            raise DomainError("hyperplanes must be linear ternary forms")
        v = np.zeros(3, dtype=complex)
        for e, c in L.terms.items():
            v[e.index(1)] = c
        vecs.append(v / np.linalg.norm(v))
    for a, b, c in combinations(range(len(vecs)), 3):
        if abs(np.linalg.det(np.stack([vecs[a], vecs[b], vecs[c]]))) < 1e-9:
            raise DomainError(f"hyperplanes {a}, {b}, {c} are not in general position")
    if not _linearly_nondegenerate(f, seed=seed):
        raise DomainError("the map is linearly degenerate (lands in a line)")
    q = len(H) - 1
    R = grid.radii[-1] * 1.01
    divs = [zero_divisor(pullback(L, f.components), R, seed=seed) for L in H]
    merged = EffectiveDivisor([pt for E in divs for pt in E.support])
    radii, jitter = grid.avoiding(merged)
    rows = []
    eps_hat = 0.0
    for r in radii:
        T = order_function(f, r, grid.quadrature_nodes)
        NS = sum(truncated_counting(E, r, truncation) for E in divs)
        margin = (q - 2) * T - NS
        rows.append((r, T, NS, margin))
        if T > 0:
            eps_hat = max(eps_hat, (margin - allowance * math.log(r)) / T)
    summary = {"eps_hat": eps_hat, "max_margin": max(row[3] for row in rows), "q": q}
    return TraceReport(("r", "T", "sum_N", "margin"), rows, eps_hat <= 0.1, summary, jitter)


def sphere_sandwich(decomp, samples=2000, seed=0):
    """Estimates of min and max of max_i |D_i(w)|^(1/d) over the unit sphere of C^3."""
    pts = qmc.Halton(d=6, scramble=True, seed=seed).random(samples)
    g = norm.ppf(np.clip(pts, 1e-12, 1 - 1e-12))
    w = g[:, :3] + 1j * g[:, 3:]
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    d = decomp.d
    vals = np.stack([np.abs(D.evaluate(w.T)) for D in decomp.divisors()])
    ratio = np.max(vals, axis=0) ** (1.0 / d)
    return float(ratio.min()), float(ratio.max())


def _is_pure_fermat(decomp):
    return all(dl == 0 for dl in decomp.deltas) and all(
        Q.terms == {(0, 0, 0): 1} or Q.terms == {(0, 0, 0): 1.0} for Q in decomp.Qs
    )


def verify_pullback_order(f, decomp, grid, samples=2000, seed=0):
    """T_g - d T_f along the grid for g = (z_i^(d - delta_i) Q_i) o f, plus sphere constants."""
    if not general_position3(*decomp.divisors(), seed=seed):
        raise DomainError("divisors are not in general position")
    g = HoloMap(tuple(pullback(D, f.components) for D in decomp.divisors()))
    rows = []
    for r in grid.radii:
        Tf = order_function(f, r, grid.quadrature_nodes)
        Tg = order_function(g, r, grid.quadrature_nodes)
        rows.append((r, Tf, Tg, Tg - decomp.d * Tf))
    dev = [row[3] for row in rows]
    osc = _oscillation(dev[len(dev) // 2:])
    c1, c2 = sphere_sandwich(decomp, samples, seed)
    bound = 3 ** -0.5 if _is_pure_fermat(decomp) else None
    sandwich_ok = 0 < c1 <= c2 < math.inf and (bound is None or c1 >= bound - 1e-12)
    summary = {"oscillation_upper_half": osc, "C1": c1, "C2": c2, "C1_bound": bound, "sandwich_ok": sandwich_ok}
    return TraceReport(("r", "T_f", "T_g", "deviation"), rows, osc < 0.5 and sandwich_ok, summary)


def write_trace(report, fh, delimiter=","):
    """One header line, then one row per radius at 17 significant digits."""
    w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
    w.writerow(report.header)
    for row in report.rows:
        w.writerow([format(float(x), ".17g") for x in row])
