"""Exponential polynomials: finite sums of p(z) * exp(q(z)).

These are the entire functions used as components of sample maps and as the
pullbacks g_i = (z_i^(d - delta_i) Q_i) o f in the Borel analysis.
"""
from __future__ import annotations

from numbers import Number

import numpy as np

from .errors import DomainError, ResourceError
from .polynomial import MPoly, UniPoly

__all__ = ["EntireFn", "pullback", "ZERO_TOL", "TERM_CAP"]

ZERO_TOL = 1e-12
TERM_CAP = 4096
_Q_DIGITS = 12


def _q_key(q):
    return tuple((round(c.real, _Q_DIGITS) + 0.0, round(c.imag, _Q_DIGITS) + 0.0) for c in q.coeffs)


class EntireFn:
    """z -> sum_k p_k(z) exp(q_k(z)), kept in a normal form.

    Normal form: every exponent has q_k(0) = 0 (the constant is absorbed into
    p_k), exponents are pairwise distinct, and no p_k is zero.  The zero
    function has no terms.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=(), *, cap=TERM_CAP, zero_tol=ZERO_TOL):
        merged = {}
        scale = {}
        for p, q in terms:
            p = p if isinstance(p, UniPoly) else UniPoly(p)
            q = q if isinstance(q, UniPoly) else UniPoly(q)
            if p.is_zero():
                continue
            q0 = q.coeffs[0] if len(q) else 0j
            if q0 != 0:
                p = p * complex(np.exp(q0))
                qc = np.array(q.coeffs)
                qc[0] = 0
                q = UniPoly(qc)
            q = q.trim(1e-15) if q.degree > 0 else q
            key = _q_key(q)
            if key in merged:
                merged[key] = (merged[key][0] + p, merged[key][1])
            else:
                merged[key] = (p, q)
            scale[key] = max(scale.get(key, 0.0), p.max_coeff())
        out = []
        for key, (p, q) in merged.items():
            c = np.array(p.coeffs)
            c[np.abs(c) <= zero_tol * scale[key]] = 0
            p = UniPoly(c)
            if not p.is_zero():
                out.append((p, q))
        if cap is not None and len(out) > cap:
            raise ResourceError(f"EntireFn has {len(out)} terms, cap is {cap}", bound=cap)
        out.sort(key=lambda t: _q_key(t[1]))
        self.terms = tuple(out)

    # -- constructors --------------------------------------------------------
    @classmethod
    def constant(cls, c):
        return cls([(UniPoly([c]), UniPoly())])

    @classmethod
    def poly(cls, coeffs):
        p = coeffs if isinstance(coeffs, UniPoly) else UniPoly(coeffs)
        return cls([(p, UniPoly())])

    @classmethod
    def exp(cls, q, p=1.0):
        """p * exp(q) for coefficient sequences or UniPolys."""
        p = p if isinstance(p, UniPoly) else UniPoly(np.atleast_1d(p))
        q = q if isinstance(q, UniPoly) else UniPoly(q)
        return cls([(p, q)])

    @classmethod
    def identity(cls):
        return cls.poly([0, 1])

    # -- structure -----------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_polynomial(self):
        return len(self.terms) <= 1 and all(q.degree <= 0 for _, q in self.terms)

    def as_polynomial(self):
        if not self.is_polynomial():
            raise DomainError("function has exponential terms")
        return self.terms[0][0] if self.terms else UniPoly()

    def is_constant(self):
        return self.is_polynomial() and (self.is_zero() or self.terms[0][0].degree == 0)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        parts = [f"({np.round(p.coeffs, 10).tolist()}, {np.round(q.coeffs, 10).tolist()})" for p, q in self.terms]
        return "EntireFn([" + ", ".join(parts) + "])"

    def __eq__(self, other):
        if not isinstance(other, EntireFn):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    # -- arithmetic -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, EntireFn):
            return other
        if isinstance(other, Number):
            return EntireFn.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return EntireFn(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return EntireFn([(-p, q) for p, q in self.terms])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return EntireFn.mul(self, other)

    __rmul__ = __mul__

    @staticmethod
    def mul(a, b, cap=TERM_CAP):
        if cap is not None and len(a.terms) * len(b.terms) > 64 * cap:
            raise ResourceError(f"product would exceed term cap {cap}", bound=cap)
        return EntireFn([(p1 * p2, q1 + q2) for p1, q1 in a.terms for p2, q2 in b.terms], cap=cap)

    def __pow__(self, k):
        if k < 0:
            raise DomainError("negative power")
        out = EntireFn.constant(1.0)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def deriv(self):
        return EntireFn([(p.deriv() + p * q.deriv(), q) for p, q in self.terms])

    # -- evaluation ------------------------------------------------------------
    def _log_parts(self, z):
        """Per-term (p_k(z), q_k(z)) and the common shift M = max log|term|."""
        z = np.asarray(z, dtype=complex)
        pv = [p(z) for p, _ in self.terms]
        qv = [q(z) if q.degree >= 0 else np.zeros_like(z) for _, q in self.terms]
        with np.errstate(divide="ignore"):
            logs = [np.log(np.abs(a)) + b.real for a, b in zip(pv, qv)]
        shift = np.max(np.stack(logs), axis=0) if logs else np.full(z.shape, -np.inf)
        shift = np.where(np.isfinite(shift), shift, 0.0)
        return pv, qv, shift

    def scaled(self, z):
        """(s, M) with h(z) = s * exp(M) and |s| of order one."""
        z = np.asarray(z, dtype=complex)
        if self.is_zero():
            return np.zeros_like(z), np.zeros(z.shape)
        pv, qv, shift = self._log_parts(z)
        s = np.zeros_like(z)
        for a, b in zip(pv, qv):
            s = s + a * np.exp(b - shift)
        return s, shift

    def __call__(self, z):
        s, m = self.scaled(z)
        with np.errstate(over="ignore"):
            out = s * np.exp(m)
        return out if np.ndim(out) else complex(out)

    def log_abs(self, z):
        """log|h(z)| without overflow (-inf at zeros)."""
        s, m = self.scaled(z)
        with np.errstate(divide="ignore"):
            out = np.log(np.abs(s)) + m
        return out if np.ndim(out) else float(out)


def pullback(P, f, cap=TERM_CAP):
    """P(f_0, ..., f_n) as an EntireFn.

    ``cap`` bounds the number of terms of every intermediate product.
    """
    if not isinstance(P, MPoly):
        raise DomainError("pullback needs a polynomial")
    if len(f) != P.nvars:
        raise DomainError(f"map has {len(f)} components, polynomial has {P.nvars} variables")
    cache = {}

    def power(i, k):
        if (i, k) not in cache:
            if k == 0:
                cache[(i, k)] = EntireFn.constant(1.0)
            elif k == 1:
                cache[(i, k)] = f[i]
            else:
                half = power(i, k // 2)
                sq = EntireFn.mul(half, half, cap)
                cache[(i, k)] = EntireFn.mul(sq, f[i], cap) if k % 2 else sq
        return cache[(i, k)]

    acc = []
    for e, c in sorted(P.terms.items()):
        term = EntireFn.constant(complex(c))
        for i, k in enumerate(e):
            if k:
                term = EntireFn.mul(term, power(i, k), cap)
                if term.is_zero():
                    break
        acc.extend(term.terms)
    return EntireFn(acc, cap=cap)
