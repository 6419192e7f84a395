"""Univariate and sparse multivariate polynomials over the complex numbers.

Univariate polynomials (:class:`UniPoly`) carry the one-variable constraint
equations; sparse homogeneous forms (:class:`HomPoly`) carry plane curves and
the tower polynomials.  Root finding uses the Aberth-Ehrlich simultaneous
iteration with multiplicity detection by clustering.
"""
from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from numbers import Number

import numpy as np

from .errors import DomainError, NumericError

__all__ = [
    "UniPoly",
    "MPoly",
    "HomPoly",
    "HomPoly3",
    "roots_with_multiplicity",
    "resultant",
    "resultant_is_zero",
    "sylvester_matrix",
    "poly_gcd",
    "hom_eval",
    "hom_partial",
    "substitute_ray",
    "check_finite",
]

CLUSTER_EPS = 1e-8
ROOT_RESIDUAL_TOL = 1e-10
ROOT_MAX_ITER = 1000


def check_finite(*values):
    for v in values:
        arr = np.asarray(v, dtype=complex)
        if not np.all(np.isfinite(arr)):
            raise DomainError(f"non-finite scalar {v!r}")


# ---------------------------------------------------------------------------
# univariate
# ---------------------------------------------------------------------------


class UniPoly:
    """Dense univariate polynomial; ``coeffs[k]`` multiplies ``z**k``.

    Trailing exact zeros are dropped, so ``degree`` is the index of the last
    nonzero coefficient (``-1`` for the zero polynomial).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = np.array(coeffs, dtype=complex).ravel()
        check_finite(c)
        nz = np.nonzero(c)[0]
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        c.setflags(write=False)
        self.coeffs = c

    @classmethod
    def monomial(cls, k, c=1.0):
        out = np.zeros(k + 1, dtype=complex)
        out[k] = c
        return cls(out)

    @classmethod
    def from_roots(cls, roots):
        p = np.array([1.0 + 0j])
        for r in roots:
            p = np.concatenate([[0j], p]) - r * np.concatenate([p, [0j]])
        return cls(p)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return len(self.coeffs) == 0

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        return f"UniPoly({np.round(self.coeffs, 12).tolist()})"

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out if out.ndim else complex(out)

    def abs_scale(self, z):
        """Evaluation scale sum |c_k| |z|^k, used for relative residuals."""
        a = np.abs(np.asarray(z, dtype=complex))
        out = np.zeros_like(a)
        for c in np.abs(self.coeffs[::-1]):
            out = out * a + c
        return out if out.ndim else float(out)

    def max_coeff(self):
        return float(np.max(np.abs(self.coeffs))) if len(self.coeffs) else 0.0

    def deriv(self, k=1):
        c = np.asarray(self.coeffs)
        for _ in range(k):
            if len(c) <= 1:
                return UniPoly()
            c = c[1:] * np.arange(1, len(c))
        return UniPoly(c)

    def taylor_coeff(self, z, j):
        """p^{(j)}(z) / j!"""
        return self.deriv(j)(z) / math.factorial(j)

    def trim(self, eps):
        """Drop trailing coefficients with modulus <= eps * max coefficient."""
        if self.is_zero():
            return self
        c = np.array(self.coeffs)
        c[np.abs(c) <= eps * self.max_coeff()] = 0
        return UniPoly(c)

    def monic(self):
        if self.is_zero():
            raise DomainError("zero polynomial has no monic form")
        return UniPoly(self.coeffs / self.coeffs[-1])

    def _binary(self, other, op):
        if isinstance(other, Number):
            other = UniPoly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        a[: len(self.coeffs)] = self.coeffs
        b[: len(other.coeffs)] = other.coeffs
        return UniPoly(op(a, b))

    def __add__(self, other):
        return self._binary(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return UniPoly(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Number):
            return UniPoly(self.coeffs * other)
        if self.is_zero() or other.is_zero():
            return UniPoly()
        return UniPoly(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k):
        out = UniPoly([1.0])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(tuple(self.coeffs.tolist()))

    def divmod(self, other):
        if other.is_zero():
            raise DomainError("division by the zero polynomial")
        r = np.array(self.coeffs)
        dq = other.degree
        if self.degree < dq:
            return UniPoly(), self
        q = np.zeros(self.degree - dq + 1, dtype=complex)
        lead = other.coeffs[-1]
        for k in range(self.degree - dq, -1, -1):
            q[k] = r[k + dq] / lead
            r[k : k + dq + 1] -= q[k] * other.coeffs
            r[k + dq] = 0
        return UniPoly(q), UniPoly(r[:dq])


# ---------------------------------------------------------------------------
# Aberth-Ehrlich root finding
# ---------------------------------------------------------------------------


def _horner_pd(c, z):
    """Value and derivative of the ascending-coefficient polynomial c at z."""
    p = np.full_like(z, c[-1])
    dp = np.zeros_like(z)
    for a in c[-2::-1]:
        dp = dp * z + p
        p = p * z + a
    return p, dp


def _initial_guess(c, rng):
    """Starting points on circles read off the Newton polygon of |c_k|."""
    n = len(c) - 1
    logs = np.full(n + 1, -np.inf)
    nz = np.abs(c) > 0
    logs[nz] = np.log(np.abs(c[nz]))
    hull = []
    for k in range(n + 1):
        if not nz[k]:
            continue
        while len(hull) >= 2:
            i, j = hull[-2], hull[-1]
            # keep the upper hull
            if (logs[j] - logs[i]) * (k - i) <= (logs[k] - logs[i]) * (j - i):
                hull.pop()
            else:
                break
        hull.append(k)
    z = []
    sigma = 0.7 + 0.05 * rng.random()
    for i, j in zip(hull[:-1], hull[1:]):
        m = j - i
        u = math.exp((logs[i] - logs[j]) / m)
        ang = 2 * math.pi * np.arange(m) / m + 2 * math.pi * i / n + sigma
        z.extend(u * np.exp(1j * ang))
    return np.array(z, dtype=complex)


def _aberth(c, rng, max_iter):
    n = len(c) - 1
    z = _initial_guess(c, rng)
    z = z * (1 + 1e-3 * (rng.random(n) - 0.5))
    active = np.ones(n, dtype=bool)
    absc = np.abs(c)
    for _ in range(max_iter):
        if not active.any():
            break
        za = z[active]
        p, dp = _horner_pd(c, za)
        scale = np.zeros(za.shape)
        az = np.abs(za)
        for a in absc[::-1]:
            scale = scale * az + a
        done = np.abs(p) <= 4 * np.finfo(float).eps * scale
        diff = za[:, None] - z[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / diff
        idx = np.nonzero(active)[0]
        inv[np.arange(len(idx)), idx] = 0
        inv[~np.isfinite(inv)] = 0
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = p / dp
            step = w / (1 - w * s)
        step[~np.isfinite(step)] = 0
        step[done] = 0
        z[idx] = za - step
        small = np.abs(step) <= 2 * np.finfo(float).eps * np.maximum(np.abs(za), 1e-300)
        active[idx[done | small]] = False
    return z


def _link_groups(points, radius):
    """Single-linkage groups of points closer than ``radius`` (array or scalar)."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    if n:
        d = np.abs(points[:, None] - points[None, :])
        rad = np.broadcast_to(np.asarray(radius, dtype=float), (n,))
        close = d <= np.minimum(rad[:, None], rad[None, :])
        for i, j in zip(*np.nonzero(np.triu(close, 1))):
            parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _is_multiple_root(p, members, center, factor=20.0):
    """Whether a root group is one k-fold root split apart by rounding.

    A perturbation of size eps * scale moves a k-fold root by about
    (eps * scale / |p^(k)(c) / k!|)^(1/k); the group is accepted when its
    spread is within ``factor`` times that radius.
    """
    k = len(members)
    tk = abs(p.taylor_coeff(center, k))
    if tk == 0:
        return False
    radius = (np.finfo(float).eps * p.abs_scale(center) / tk) ** (1.0 / k)
    spread = float(np.max(np.abs(members - center)))
    return spread <= factor * radius


def _polish_multiple(p, center, k, steps=8):
    """Newton on p^(k-1), which has a simple root at a k-fold root of p."""
    if k == 1:
        return center
    q = p.deriv(k - 1)
    dq = q.deriv()
    z = center
    for _ in range(steps):
        d = dq(z)
        if d == 0:
            break
        step = q(z) / d
        if not np.isfinite(step) or abs(step) > 0.5 * max(1.0, abs(z)):
            break
        z -= step
        if abs(step) <= 4 * np.finfo(float).eps * max(1.0, abs(z)):
            break
    return complex(z)


def _cluster(p, roots, cluster_eps):
    """Partition numerical roots into (root, multiplicity) pairs."""
    out = []
    levels = [r for r in (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7) if r > cluster_eps]

    def visit(idx, level):
        pts = roots[idx]
        if level < len(levels):
            rad = levels[level] * np.maximum(1.0, np.abs(pts))
        else:
            rad = np.full(len(pts), cluster_eps)
        for g in _link_groups(pts, rad):
            members = [idx[i] for i in g]
            if len(members) == 1:
                out.append((complex(roots[members[0]]), 1))
                continue
            center = complex(np.mean(roots[members]))
            if level >= len(levels) or _is_multiple_root(p, roots[members], center):
                out.append((_polish_multiple(p, center, len(members)), len(members)))
            else:
                visit(members, level + 1)

    visit(list(range(len(roots))), 0)
    return out


def _canonical_key(z, digits=9):
    return (round(z.real, digits) + 0.0, round(z.imag, digits) + 0.0)


def roots_with_multiplicity(
    p,
    cluster_eps=None,
    *,
    residual_tol=None,
    max_iter=None,
    seed=0,
    restarts=4,
):
    """Roots of ``p`` with multiplicities.

    Roots within ``cluster_eps`` of each other are merged; numerically split
    multiple roots are also merged when the Taylor coefficients of ``p`` at the
    cluster centroid vanish to working precision.
    """
    # module-level defaults are read at call time so a run config can adjust them
    cluster_eps = CLUSTER_EPS if cluster_eps is None else cluster_eps
    residual_tol = ROOT_RESIDUAL_TOL if residual_tol is None else residual_tol
    max_iter = ROOT_MAX_ITER if max_iter is None else max_iter
    if not isinstance(p, UniPoly):
        p = UniPoly(p)
    if p.is_zero():
        raise DomainError("roots of the zero polynomial are undefined")
    c = np.array(p.coeffs)
    nzero = int(np.argmax(c != 0))
    c = c[nzero:]
    result = [(0j, nzero)] if nzero else []
    n = len(c) - 1
    if n == 1:
        result.append((complex(-c[0] / c[1]), 1))
    elif n >= 2:
        c = c / c[-1]
        q = UniPoly(c)
        rng = np.random.default_rng(seed)
        worst = None
        for _ in range(restarts):
            z = _aberth(c, rng, max_iter)
            res = np.abs(q(z)) / np.maximum(q.abs_scale(z), 1e-300)
            worst = float(np.max(res))
            if np.all(np.isfinite(z)) and worst <= residual_tol:
                break
        else:
            raise NumericError(
                f"root finder did not converge (relative residual {worst:.3e})", residual=worst
            )
        result.extend(_cluster(q, z, cluster_eps))
    result.sort(key=lambda rm: _canonical_key(rm[0]))
    return result


# ---------------------------------------------------------------------------
# resultants and gcd
# ---------------------------------------------------------------------------


def sylvester_matrix(p, q):
    """Sylvester matrix of two univariate polynomials (descending rows)."""
    m, n = p.degree, q.degree
    size = m + n
    S = np.zeros((size, size), dtype=complex)
    pd = p.coeffs[::-1]
    qd = q.coeffs[::-1]
    for i in range(n):
        S[i, i : i + m + 1] = pd
    for i in range(m):
        S[n + i, i : i + n + 1] = qd
    return S


def resultant(p, q):
    """Resultant of two nonzero univariate polynomials (Sylvester determinant)."""
    if p.is_zero() or q.is_zero():
        raise DomainError("resultant with the zero polynomial")
    if p.degree + q.degree == 0:
        return 1.0 + 0j
    return complex(np.linalg.det(sylvester_matrix(p, q)))


def resultant_is_zero(p, q, rtol=1e-9):
    """Whether res(p, q) vanishes relative to the Hadamard bound of its matrix."""
    r = resultant(p, q)
    bound = np.linalg.norm(p.coeffs) ** q.degree * np.linalg.norm(q.coeffs) ** p.degree
    return abs(r) <= rtol * bound


def poly_gcd(p, q, eps=1e-10):
    """Approximate monic gcd by Euclidean remainders with eps truncation."""
    if p.is_zero() and q.is_zero():
        raise DomainError("gcd(0, 0) is undefined")
    a, b = (p, q) if p.degree >= q.degree else (q, p)
    if b.is_zero():
        return a.monic()
    a = UniPoly(a.coeffs / a.max_coeff())
    b = UniPoly(b.coeffs / b.max_coeff())
    while not b.is_zero():
        _, r = a.divmod(b)
        scale = max(a.max_coeff(), b.max_coeff())
        rc = np.array(r.coeffs)
        rc[np.abs(rc) <= eps * scale] = 0
        r = UniPoly(rc)
        if not r.is_zero():
            r = UniPoly(r.coeffs / r.max_coeff())
        a, b = b, r
    return a.monic()


# ---------------------------------------------------------------------------
# sparse multivariate
# ---------------------------------------------------------------------------


class MPoly:
    """Sparse polynomial in ``nvars`` variables.

    ``terms`` maps exponent tuples to coefficients.  Coefficients may be any
    numeric type (ints stay exact); exact zeros are never stored.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        if nvars < 1:
            raise DomainError("nvars must be positive")
        acc = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars or min(e) < 0:
                raise DomainError(f"bad exponent {e} for {nvars} variables")
            acc[e] = acc.get(e, 0) + c
        self.nvars = nvars
        self.terms = {e: c for e, c in acc.items() if c != 0}

    @classmethod
    def constant(cls, nvars, c):
        return MPoly(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return MPoly(nvars, {tuple(e): 1})

    # -- structure ---------------------------------------------------------
    def is_zero(self):
        return not self.terms

    @property
    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self):
        return len({sum(e) for e in self.terms}) <= 1

    def degree_in(self, i):
        return max((e[i] for e in self.terms), default=-1)

    def involves(self, i):
        return any(e[i] for e in self.terms)

    def variables(self):
        return {i for i in range(self.nvars) if self.involves(i)}

    def max_coeff(self):
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def coefficients_in(self, i):
        """Map k -> coefficient MPoly of var_i**k (var_i removed)."""
        out = {}
        for e, c in self.terms.items():
            rest = e[:i] + (0,) + e[i + 1 :]
            out.setdefault(e[i], {})[rest] = c
        return {k: MPoly(self.nvars, t) for k, t in out.items()}

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * self.nvars, 0)

    def __repr__(self):
        return f"{type(self).__name__}({self.nvars}, {self.terms!r})"

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise DomainError("variable count mismatch")
            return other
        if isinstance(other, Number):
            return MPoly.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return MPoly(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return MPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return MPoly(self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = MPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # -- calculus and substitution ------------------------------------------
    def partial(self, i):
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                t[tuple(f)] = c * e[i]
        return MPoly(self.nvars, t)

    def evaluate(self, point):
        """Value at ``point`` (sequence of nvars scalars or broadcastable arrays)."""
        if len(point) != self.nvars:
            raise DomainError(f"expected {self.nvars} coordinates, got {len(point)}")
        pts = [np.asarray(x, dtype=complex) for x in point]
        out = np.zeros(np.broadcast(*pts).shape, dtype=complex)
        for e, c in self.terms.items():
            term = complex(c)
            for x, k in zip(pts, e):
                if k:
                    term = term * x**k
            out = out + term
        return out if out.ndim else complex(out)

    __call__ = lambda self, *point: self.evaluate(point)  # noqa: E731

    def abs_scale(self, point):
        """sum |c| |x^e| at ``point``."""
        pts = [np.abs(np.asarray(x, dtype=complex)) for x in point]
        out = np.zeros(np.broadcast(*pts).shape)
        for e, c in self.terms.items():
            term = abs(c)
            for x, k in zip(pts, e):
                if k:
                    term = term * x**k
            out = out + term
        return out if out.ndim else float(out)

    def substitute(self, values):
        """Replace the variables in ``values`` (index -> scalar) by numbers."""
        t = {}
        for e, c in self.terms.items():
            coef = c
            f = list(e)
            for i, v in values.items():
                if f[i]:
                    coef = coef * v ** f[i]
                    f[i] = 0
            f = tuple(f)
            t[f] = t.get(f, 0) + coef
        return MPoly(self.nvars, t)

    def compose(self, subs, cap=None):
        """Substitute polynomial ``subs[i]`` for variable i.

        ``cap`` bounds the size of every intermediate product; exceeding it
        raises :class:`ResourceError`.
        """
        from .errors import ResourceError

        if len(subs) != self.nvars:
            raise DomainError("need one substitution per variable")
        m = subs[0].nvars
        powers = [dict() for _ in subs]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                if k == 0:
                    cache[k] = {(0,) * m: 1}
                else:
                    prev = power(i, k - 1)
                    cache[k] = _mul_dicts(prev, subs[i].terms, cap)
            return cache[k]

        acc = {}
        for e, c in self.terms.items():
            prod = {(0,) * m: c}
            for i, k in enumerate(e):
                if k:
                    prod = _mul_dicts(prod, power(i, k), cap)
            for f, v in prod.items():
                acc[f] = acc.get(f, 0) + v
            if cap is not None and len(acc) > cap:
                raise ResourceError(f"term count exceeds cap {cap}", bound=cap)
        return MPoly(m, acc)

    def embed(self, nvars, positions):
        """Same polynomial viewed in ``nvars`` variables; var i -> positions[i]."""
        t = {}
        for e, c in self.terms.items():
            f = [0] * nvars
            for i, k in enumerate(e):
                f[positions[i]] += k
            t[tuple(f)] = c
        return MPoly(nvars, t)

    def chop(self, rtol):
        """Drop coefficients with modulus <= rtol * max coefficient."""
        m = self.max_coeff()
        return MPoly(self.nvars, {e: c for e, c in self.terms.items() if abs(c) > rtol * m})

    def to_univariate(self, i):
        """UniPoly in variable i; every other variable must be absent."""
        c = np.zeros(max(self.degree_in(i), 0) + 1, dtype=complex)
        for e, v in self.terms.items():
            if any(k for j, k in enumerate(e) if j != i):
                raise DomainError("polynomial involves other variables")
            c[e[i]] += v
        return UniPoly(c)


def _mul_dicts(a, b, cap):
    from .errors import ResourceError

    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
        if cap is not None and len(out) > cap:
            raise ResourceError(f"term count exceeds cap {cap}", bound=cap)
    return {e: c for e, c in out.items() if c != 0}


class HomPoly(MPoly):
    """Homogeneous form of degree ``deg`` in ``nvars`` variables."""

    __slots__ = ("deg",)

    def __init__(self, nvars, terms=None, deg=None):
        super().__init__(nvars, terms)
        degs = {sum(e) for e in self.terms}
        if len(degs) > 1:
            raise DomainError(f"terms of mixed degree {sorted(degs)}")
        if deg is None:
            if not degs:
                raise DomainError("degree of the zero form must be given")
            deg = degs.pop()
        elif degs and degs != {deg}:
            raise DomainError(f"terms have degree {degs.pop()}, expected {deg}")
        if deg < 0:
            raise DomainError("negative degree")
        self.deg = int(deg)

    @classmethod
    def from_mpoly(cls, p, deg=None):
        return cls(p.nvars, p.terms, deg)

    def __repr__(self):
        return f"HomPoly({self.nvars}, deg={self.deg}, {self.terms!r})"

    def __add__(self, other):
        if isinstance(other, HomPoly) and other.deg == self.deg and other.nvars == self.nvars:
            return HomPoly.from_mpoly(MPoly.__add__(self, other), self.deg)
        return MPoly.__add__(self, other)

    def __sub__(self, other):
        if isinstance(other, HomPoly) and other.deg == self.deg and other.nvars == self.nvars:
            return HomPoly.from_mpoly(MPoly.__sub__(self, other), self.deg)
        return MPoly.__sub__(self, other)

    def __neg__(self):
        return HomPoly.from_mpoly(MPoly.__neg__(self), self.deg)

    def __mul__(self, other):
        if isinstance(other, Number):
            return HomPoly.from_mpoly(MPoly.__mul__(self, other), self.deg)
        if isinstance(other, HomPoly):
            return HomPoly.from_mpoly(MPoly.__mul__(self, other), self.deg + other.deg)
        return MPoly.__mul__(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k):
        return HomPoly.from_mpoly(MPoly.__pow__(self, k), self.deg * k)

    def partial(self, i):
        return HomPoly.from_mpoly(MPoly.partial(self, i), max(self.deg - 1, 0))


def HomPoly3(terms=None, deg=None):
    """Homogeneous form in z0, z1, z2."""
    return HomPoly(3, terms, deg)


def monomial(nvars, exps, c=1):
    return HomPoly(nvars, {tuple(exps): c})


def hom_eval(P, point):
    """Value of a homogeneous form at a point of C^n."""
    if len(point) != P.nvars:
        raise DomainError(f"point has {len(point)} coordinates, form has {P.nvars} variables")
    check_finite(point)
    return P.evaluate(point)


def hom_partial(P, var_index):
    """Formal partial derivative; the degree drops by one."""
    if not 0 <= var_index < P.nvars:
        raise DomainError(f"no variable z{var_index}")
    return P.partial(var_index)


def substitute_ray(P, i, j, lam):
    """Set z_i = lam * z_j and z_j = 1; return a UniPoly in the remaining variable."""
    if P.nvars != 3:
        raise DomainError("substitute_ray expects a ternary form")
    if i == j:
        raise DomainError("ray substitution needs two distinct variables")
    check_finite(lam)
    (k,) = {0, 1, 2} - {i, j}
    c = np.zeros(max(P.deg, 0) + 1, dtype=complex)
    for e, v in P.terms.items():
        c[e[k]] += complex(v) * complex(lam) ** e[i]
    return UniPoly(c)
