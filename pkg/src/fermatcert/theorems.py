"""Certificate producers for the two hyperbolicity criteria and the tower polynomials."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from .borel import COMPACT, LOG, FermatDecomposition, engine_verdict, run_engine
from .entire import EntireFn, pullback
from .errors import DomainError, ResourceError, UnresolvedCaseError
from .geometry import (
    PlaneCurve,
    ProjPoint2,
    delta_quasihom,
    general_position3,
    genus_noguchi,
    genus_smooth,
    no_offorigin_singularities,
    noguchi_curve,
    offorigin_singular_points,
    singular_locus,
)
from .polynomial import HomPoly, MPoly, UniPoly, resultant, resultant_is_zero, roots_with_multiplicity

__all__ = [
    "Certificate",
    "HypothesisCheck",
    "check_theorem_a",
    "check_theorem_b",
    "build_Pn",
    "verify_witnesses",
    "theorem_a_polynomial",
    "theorem_a_decomposition",
    "theorem_b_polynomial",
    "theorem_b_decomposition",
    "classify_branch",
]

VERIFIED = "verified-hyperbolic"
NOT_MET = "hypotheses-not-met"
UNRESOLVED = "unresolved"
EQ_TOL = 1e-9
SEPARATION_TOL = 1e-8
PN_TERM_CAP = 200_000


def _c(z):
    z = complex(z)
    return [z.real, z.imag]


def _num(x):
    """Plain-data form of a scalar: ints and Fractions stay exact."""
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if isinstance(x, complex):
        return _c(x)
    return float(x)


@dataclass
class HypothesisCheck:
    name: str
    status: str  # passed | failed | not-applicable
    evidence: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == "passed"

    def to_dict(self):
        return {"name": self.name, "status": self.status, "evidence": self.evidence}


@dataclass
class Certificate:
    theorem: str
    parameters: dict
    hypothesis_checks: list = field(default_factory=list)
    case_records: list = field(default_factory=list)
    genus_records: list = field(default_factory=list)
    verdict: str = UNRESOLVED
    tool_version: str = __version__
    notes: list = field(default_factory=list)

    def check(self, name):
        for c in self.hypothesis_checks:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def failed_checks(self):
        return [c for c in self.hypothesis_checks if c.status == "failed"]

    def to_dict(self):
        return {
            "theorem": self.theorem,
            "tool_version": self.tool_version,
            "verdict": self.verdict,
            "parameters": self.parameters,
            "hypothesis_checks": [c.to_dict() for c in self.hypothesis_checks],
            "case_records": self.case_records,
            "genus_records": self.genus_records,
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, data):
        checks = [HypothesisCheck(c["name"], c["status"], c.get("evidence") or {}) for c in data.get("hypothesis_checks") or []]
        return cls(
            theorem=data["theorem"],
            parameters=data.get("parameters") or {},
            hypothesis_checks=checks,
            case_records=data.get("case_records") or [],
            genus_records=data.get("genus_records") or [],
            verdict=data["verdict"],
            tool_version=data.get("tool_version", __version__),
            notes=data.get("notes") or [],
        )


def _point_record(p, mult=None):
    rec = {"point": [_c(z) for z in p.coords]}
    if mult is not None:
        rec["multiplicity"] = int(mult)
    return rec


def _case_record(o, transform=None):
    tr = transform or (lambda v: v)
    rec = {
        "label": o.case.label,
        "mode": o.case.mode,
        "shape": list(o.case.shape),
        "blocks": [list(b) for b in o.case.blocks],
        "status": o.status,
        "rigid": bool(o.rigid),
        "constraints": o.system.describe() if o.system is not None else [],
        "witness_count": o.witness_count,
        "witnesses": [_point_record(ProjPoint2(tuple(tr(np.array(p.coords)))), m) for p, m in o.witnesses],
        "max_residual": float(o.max_residual),
    }
    if o.lines:
        rec["lines"] = [
            {
                "base": [_c(z) for z in tr(np.array(ln.base))],
                "direction": [_c(z) for z in tr(np.array(ln.direction))],
                "multiplicity": ln.multiplicity,
                "punctures": [_point_record(ProjPoint2(tuple(tr(p.array)))) for p in ln.punctures],
            }
            for ln in o.lines
        ]
    if o.residual is not None:
        g = o.genus
        rec["residual"] = {
            "degree": o.residual.deg,
            "arithmetic_genus": _num(g.arithmetic_genus),
            "delta_total": _num(g.delta_total),
            "geometric_genus": _num(g.geometric_genus),
            "irreducible": g.irreducible,
            "irreducibility_reason": g.irreducibility_reason,
            "singular_points": [
                {
                    "point": [_c(z) for z in s.location.coords],
                    "local_type": s.local_type,
                    "pq": list(s.pq) if s.pq else None,
                    "branches": s.branches,
                    "delta": _num(s.delta),
                }
                for s in g.singular_points
            ],
        }
    if o.notes:
        rec["notes"] = list(o.notes)
    return rec


def _verdict(cert, outcomes_ok=True):
    if cert.failed_checks:
        return NOT_MET
    if not outcomes_ok:
        return UNRESOLVED
    return VERIFIED


# ---------------------------------------------------------------------------
# Theorem A family: z0^d + z1^d + z2^(d-2) (eps0 z0^2 + eps1 z1^2 + z2^2)
# ---------------------------------------------------------------------------


def theorem_a_polynomial(d, eps0, eps1):
    t = {(d, 0, 0): 1, (0, d, 0): 1, (2, 0, d - 2): eps0, (0, 2, d - 2): eps1, (0, 0, d): 1}
    return HomPoly(3, t, d)


def theorem_a_decomposition(d, eps0, eps1, check_general_position=True):
    one = HomPoly(3, {(0, 0, 0): 1})
    Q2 = HomPoly(3, {(2, 0, 0): eps0, (0, 2, 0): eps1, (0, 0, 2): 1}, 2)
    return FermatDecomposition(d, (0, 0, 2), (one, one, Q2), LOG, check_general_position)


def _affine_singularity_resultant(d, eps):
    """res_X(d X^(d-2) + 2 eps, eps (1 - 2/d) X^2 + 1)."""
    p = np.zeros(d - 1, dtype=complex)
    p[0], p[d - 2] = 2 * eps, d
    q = np.array([1.0, 0.0, eps * (1 - 2 / d)], dtype=complex)
    P, Q = UniPoly(p), UniPoly(q)
    if Q.degree == 0:
        return complex(resultant(P, Q)), False
    return complex(resultant(P, Q)), bool(resultant_is_zero(P, Q))


def _escape_curve(line, decomp):
    """An entire curve in a punctured line (at most one puncture) avoiding the divisor sum."""
    base = np.array(line.base, dtype=complex)
    direction = np.array(line.direction, dtype=complex)
    punct = line.punctures
    S = decomp.defining()
    ez = EntireFn.exp([0, 1])
    one = EntireFn.constant(1.0)
    if not punct:
        s_fn, t_fn = one, EntireFn.identity()
    else:
        p = punct[0].array
        # parameter of the puncture: p ~ s0 base + t0 direction
        A = np.stack([base, direction], axis=1)
        st, *_ = np.linalg.lstsq(A, p, rcond=None)
        st = st / st[np.argmax(np.abs(st))]
        st[np.abs(st) < 1e-12] = 0
        s0, t0 = st
        # (s, t) = e^z (s0, t0) + w with w not proportional to (s0, t0)
        other = np.array([1.0, 0.0]) if abs(t0) > abs(s0) else np.array([0.0, 1.0])
        s_fn = EntireFn.constant(s0) * ez + other[0]
        t_fn = EntireFn.constant(t0) * ez + other[1]
    comps = tuple(s_fn * complex(b) + t_fn * complex(v) for b, v in zip(base, direction))
    h = pullback(S, comps)
    top = max((p.max_coeff() for p, _ in h.terms), default=0.0)
    h = EntireFn([(p.trim(1e-10 * top), q) for p, q in h.terms])
    nowhere_zero = len(h.terms) == 1 and h.terms[0][0].degree == 0
    return comps, h, nowhere_zero


def _entire_text(fn):
    from .textformat import format_entire

    return format_entire(fn)


def check_theorem_a(d, eps0, eps1, seed=0):
    """Certificate for the complement of z0^d + z1^d + z2^(d-2)(eps0 z0^2 + eps1 z1^2 + z2^2) = 0."""
    eps0, eps1 = complex(eps0), complex(eps1)
    cert = Certificate("A", {"d": d, "eps0": _c(eps0), "eps1": _c(eps1)})
    checks = cert.hypothesis_checks
    checks.append(HypothesisCheck("degree", "passed" if d >= 9 else "failed", {"required": "d >= 9", "d": d}))
    if d < 3:
        cert.verdict = NOT_MET
        return cert

    D2 = HomPoly(3, {(2, 0, d - 2): eps0, (0, 2, d - 2): eps1, (0, 0, d): 1}, d)
    gp = general_position3(HomPoly(3, {(d, 0, 0): 1}), HomPoly(3, {(0, d, 0): 1}), D2, seed=seed)
    checks.append(HypothesisCheck(
        "general_position", "passed" if gp else "failed",
        {"common_zero": None if gp.common_zero is None else [_c(z) for z in gp.common_zero.coords]},
    ))

    lam = roots_with_multiplicity(UniPoly.monomial(d) + 1.0, seed=seed)
    vals = [abs(eps0 * l * l + eps1) for l, _ in lam]
    worst = min(vals)
    checks.append(HypothesisCheck(
        "eps_at_roots_of_minus_one", "passed" if worst > SEPARATION_TOL else "failed",
        {"min_abs_eps0_lambda2_plus_eps1": worst, "tolerance": SEPARATION_TOL, "roots": len(lam)},
    ))

    ev = {}
    ok4 = True
    for name, eps, mirror in (("eps0", eps0, False), ("eps1", eps1, True)):
        sub = {}
        if abs(eps) <= SEPARATION_TOL:
            sub["degenerate_residual_curve"] = True
            ok4 = False
        else:
            res, vanishes = _affine_singularity_resultant(d, eps)
            sub["resultant"] = _c(res)
            sub["resultant_vanishes"] = vanishes
            if vanishes:
                ok4 = False
        ev[name] = sub
    if ok4 and d >= 3:
        # second route: singular points of both residual curves must lie on z2 = 0
        for name, k in (("eps0", 0), ("eps1", 1)):
            F = _residual_curve_a(d, eps0, eps1, k)
            sing = singular_locus(PlaneCurve(F), seed=seed)
            affine = [s for s in sing if abs(s.location.coords[2]) > 1e-9]
            ev[name]["singular_points"] = [[_c(z) for z in s.location.coords] for s in sing]
            ev[name]["affine_singular_points"] = len(affine)
            if affine:
                ok4 = False
                ev[name]["routes_disagree"] = True
    checks.append(HypothesisCheck("residual_curves_nondegenerate_and_affinely_smooth",
                                  "passed" if ok4 else "failed", ev))

    if not gp or d < 9:
        cert.verdict = _verdict(cert)
        return cert
    decomp = theorem_a_decomposition(d, eps0, eps1)
    try:
        outcomes = run_engine(decomp, seed=seed)
    except UnresolvedCaseError as exc:
        checks.append(HypothesisCheck("borel_cases", "not-applicable", {"unresolved": exc.label, "partial": exc.partial}))
        cert.verdict = NOT_MET if cert.failed_checks else UNRESOLVED
        return cert
    cert.case_records = [_case_record(o) for o in outcomes]
    rigid = engine_verdict(outcomes) == "rigid"
    cert.notes.append(f"engine: {engine_verdict(outcomes)}")
    genus_ok = True
    for o in outcomes:
        if o.residual is not None:
            g = o.genus
            cert.genus_records.append({
                "curve": f"residual {o.case.label}",
                "genus": _num(g.geometric_genus),
                "arithmetic_genus": _num(g.arithmetic_genus),
                "delta_total": _num(g.delta_total),
            })
            if g.geometric_genus is None or g.geometric_genus < 2:
                genus_ok = False
    cert.genus_records.append({"curve": f"smooth plane curve of degree {d}", "genus": _num(genus_smooth(d))})
    checks.append(HypothesisCheck("residual_genus_at_least_2", "passed" if genus_ok else "failed",
                                  {"records": len(cert.genus_records)}))
    for o in outcomes:
        if not o.rigid and o.lines:
            comps, h, nz = _escape_curve(o.lines[0], decomp)
            cert.notes.append(
                f"case {o.case.label} is not rigid: the entire curve ["
                + " : ".join(_entire_text(c) for c in comps)
                + f"] pulls back to {_entire_text(h)} ({'nowhere zero' if nz else 'check failed'})"
            )
    if cert.failed_checks:
        cert.verdict = NOT_MET
    else:
        cert.verdict = VERIFIED if rigid else UNRESOLVED
    return cert


def _residual_curve_a(d, eps0, eps1, which):
    """z_which^d + z2^(d-2)(eps0 z0^2 + eps1 z1^2 + z2^2)."""
    e = [0, 0, 0]
    e[which] = d
    t = {tuple(e): 1, (2, 0, d - 2): eps0, (0, 2, d - 2): eps1, (0, 0, d): 1}
    return HomPoly(3, {k: v for k, v in t.items() if v != 0}, d)


# ---------------------------------------------------------------------------
# Theorem B family: P(z0, z1) = a P(b z1, z2), P(x, y) = x^d + y^d + x^e y^(d-e)
# ---------------------------------------------------------------------------


def _P(d, e):
    t = {}
    for k, c in (((d, 0), 1), ((0, d), 1), ((e, d - e), 1)):
        t[k] = t.get(k, 0) + c
    return MPoly(2, t)


def theorem_b_polynomial(a, b, d, e):
    """P(z0, z1) - a P(b z1, z2) as a ternary form."""
    P = _P(d, e)
    z = [MPoly.variable(3, i) for i in range(3)]
    lhs = P.compose([z[0], z[1]])
    rhs = P.compose([z[1] * b, z[2]])
    return HomPoly.from_mpoly(lhs - rhs * a, d)


def _is_rational(x):
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def classify_branch(a, b, d, tol=None):
    """('i' | 'ii' | 'iii' | 'iv', normalized a').

    Rational a, b (int or Fraction) are classified exactly; anything else
    compares a b^d with 1 and 2 at absolute tolerance ``tol``.
    """
    if _is_rational(a) and _is_rational(b):
        if b == 0:
            return "i", complex(a)
        k = Fraction(a) * Fraction(b) ** d
        return {1: "iv", 2: "iii"}.get(k, "ii"), complex(k)
    tol = EQ_TOL if tol is None else tol
    a, b = complex(a), complex(b)
    if b == 0:
        return "i", a
    k = a * b**d
    if abs(k - 1) < tol:
        return "iv", 1.0 + 0j
    if abs(k - 2) < tol:
        return "iii", 2.0 + 0j
    return "ii", k


def theorem_b_decomposition(a, d, e, b_zero, check_general_position=True):
    """Fermat decomposition of P(z0, z1) - a P(0, z2) (b_zero) or P(z0, z1) - a P(z1, z2)."""
    one = HomPoly(3, {(0, 0, 0): 1})
    if b_zero:
        if e > 0:
            Q1 = HomPoly(3, {(e, 0, 0): 1, (0, e, 0): 1})
            Q2 = HomPoly(3, {(0, 0, 0): -a})
        else:
            Q1 = HomPoly(3, {(0, 0, 0): 2})
            Q2 = HomPoly(3, {(0, 0, 0): -2 * a})
        deltas = (0, e, 0)
    elif e > 0:
        Q1 = HomPoly(3, {(e, 0, 0): 1, (0, e, 0): 1 - a}, e)
        Q2 = HomPoly(3, {(0, e, 0): -a, (0, 0, e): -a})
        deltas = (0, e, e)
    else:
        Q1 = HomPoly(3, {(0, 0, 0): 2 - a}, 0)
        Q2 = HomPoly(3, {(0, 0, 0): -2 * a})
        deltas = (0, 0, 0)
    return FermatDecomposition(d, deltas, (one, Q1, Q2), COMPACT, check_general_position)


def _decomposition_matches(decomp, F, tol=1e-12):
    diff = decomp.defining() - F
    return diff.max_coeff() <= tol * max(F.max_coeff(), 1.0)


def check_theorem_b(a, b, d, e, seed=0):
    """Certificate for the curve P(z0, z1) = a P(b z1, z2)."""
    if a == 0:
        raise DomainError("a must be nonzero")
    if not (isinstance(d, int) and isinstance(e, int)) or e < 0 or e > d or d < 1:
        raise DomainError(f"need integers 0 <= e <= d, got d={d}, e={e}")
    branch, a1 = classify_branch(a, b, d)
    exact = _is_rational(a) and _is_rational(b)
    cert = Certificate("B", {"a": _num(a) if exact else _c(a), "b": _num(b) if exact else _c(b), "d": d, "e": e})
    cert.parameters["branch"] = branch
    cert.parameters["ab_pow_d"] = _num(Fraction(a) * Fraction(b) ** d) if exact else _c(complex(a) * complex(b) ** d)
    cert.parameters["exact_classification"] = exact
    a, b = complex(a), complex(b)
    checks = cert.hypothesis_checks
    if branch == "i":
        need = d > e + 3
        checks.append(HypothesisCheck("degree_inequality", "passed" if need else "failed", {"required": "d > e+3"}))
    else:
        need = d > 2 * e + 3
        checks.append(HypothesisCheck("degree_inequality", "passed" if need else "failed", {"required": "d > 2e+3"}))
    if branch == "iii":
        checks.append(HypothesisCheck("e_condition", "passed" if e > 0 else "failed", {"required": "e > 0"}))
    elif branch == "iv" and e > 0:
        g = math.gcd(d, e)
        checks.append(HypothesisCheck("e_condition", "passed" if g == 1 else "failed", {"required": "gcd(d, e) = 1", "gcd": g}))
    else:
        checks.append(HypothesisCheck("e_condition", "passed", {"required": "e >= 0"}))
    if cert.failed_checks:
        cert.verdict = NOT_MET
        return cert
    if b != 0:
        cert.notes.append(f"normalized to b = 1 with a' = a b^d = {a1}; witnesses map back by z2 -> b z2")

    decomp = theorem_b_decomposition(a1, d, e, branch == "i", check_general_position=False) if d > max(e, 0) else None
    if decomp is None:
        cert.verdict = NOT_MET
        return cert
    F = theorem_b_polynomial(a1, 0 if branch == "i" else 1, d, e)
    matches = _decomposition_matches(decomp, F)
    checks.append(HypothesisCheck("decomposition_identity", "passed" if matches else "failed", {}))
    gp = general_position3(*decomp.divisors(), seed=seed)
    genus_route = branch == "iv" and e > 0
    gp_ev = {"common_zero": None if gp.common_zero is None else [_c(z) for z in gp.common_zero.coords]}
    if genus_route:
        checks.append(HypothesisCheck("general_position", "not-applicable", gp_ev))
    else:
        checks.append(HypothesisCheck("general_position", "passed" if gp else "failed", gp_ev))

    if cert.failed_checks:
        cert.verdict = NOT_MET
        return cert

    if genus_route:
        _genus_route_b(cert, d, e, seed)
        cert.verdict = _verdict(cert)
        return cert

    decomp = theorem_b_decomposition(a1, d, e, branch == "i")
    try:
        outcomes = run_engine(decomp, seed=seed)
    except UnresolvedCaseError as exc:
        cert.notes.append(f"unresolved case {exc.label}")
        cert.verdict = UNRESOLVED
        return cert
    scale = np.array([1, 1, b if b != 0 else 1], dtype=complex)
    cert.case_records = [_case_record(o, lambda v: v * scale) for o in outcomes]
    rigid = engine_verdict(outcomes) == "rigid"
    cert.notes.append(f"engine: {engine_verdict(outcomes)}")
    cert.verdict = VERIFIED if rigid else UNRESOLVED
    return cert


def _genus_route_b(cert, d, e, seed):
    checks = cert.hypothesis_checks
    chain = no_offorigin_singularities(d, e)
    brute = offorigin_singular_points(d, e, seed=seed)
    checks.append(HypothesisCheck(
        "no_offorigin_singularities", "passed" if (chain and not brute) else "failed",
        {"lhs": chain.lhs, "middle": chain.middle, "rhs": chain.rhs, "chain_holds": bool(chain),
         "offorigin_points_found": len(brute)},
    ))
    C = noguchi_curve(d, e)
    sing = singular_locus(C, seed=seed)
    delta = delta_quasihom(e, d - e)
    local_ok = (
        len(sing) == 1
        and sing[0].pq is not None
        and sorted(sing[0].pq) == sorted((e, d - e))
        and sing[0].delta == delta
        and sing[0].branches == 1
    )
    checks.append(HypothesisCheck(
        "unique_singular_point", "passed" if local_ok else "failed",
        {"points": [[_c(z) for z in s.location.coords] for s in sing],
         "local_forms": [list(s.pq) if s.pq else None for s in sing],
         "delta0": _num(delta)},
    ))
    gn = genus_noguchi(d, e)
    checks.append(HypothesisCheck(
        "genus_at_least_2", "passed" if gn.value >= 2 else "failed",
        {"genus": _num(gn.value), "lower_bound": _num(gn.trace["lower_bound"])},
    ))
    cert.genus_records.append({
        "curve": "z0^d + z0^e z1^(d-e) - z1^e z2^(d-e) - z2^d",
        "genus": _num(gn.value),
        "delta0": _num(delta),
        "arithmetic_genus": _num(gn.trace["genus_smooth"]),
        "delta_route": _num(gn.trace["delta_route"]),
        "chain": {"lhs": chain.lhs, "middle": chain.middle, "rhs": chain.rhs},
    })


# ---------------------------------------------------------------------------
# tower polynomials
# ---------------------------------------------------------------------------


def build_Pn(n, d, e, cap=PN_TERM_CAP):
    """P_n(z_0..z_n) = P_{n-1}(P(z0, z1), ..., P(z_{n-1}, z_n)) with exact integer coefficients."""
    if n < 1:
        raise DomainError("n must be at least 1")
    if not 0 <= e <= d:
        raise DomainError("need 0 <= e <= d")
    P = _P(d, e)
    cur = P
    for k in range(2, n + 1):
        subs = [P.compose([MPoly.variable(k + 1, i), MPoly.variable(k + 1, i + 1)]) for i in range(k)]
        cur = cur.compose(subs, cap=cap)
        if len(cur.terms) > cap:
            raise ResourceError(f"term count exceeds cap {cap}", bound=cap)
    return HomPoly.from_mpoly(cur, d**n)


# ---------------------------------------------------------------------------
# independent witness re-validation
# ---------------------------------------------------------------------------


@dataclass
class WitnessCheck:
    ok: bool
    checked: int
    failures: list

    def __bool__(self):
        return self.ok


def verify_witnesses(cert, defining, mode, tol=1e-8):
    """Re-evaluate every recorded witness against ``defining``."""
    failures = []
    checked = 0
    for rec in cert.case_records:
        for w in rec.get("witnesses", []):
            p = ProjPoint2(tuple(complex(re, im) for re, im in w["point"]))
            val = defining.evaluate(p.coords)
            scale = max(defining.abs_scale(p.coords), 1e-300)
            rel = abs(val) / scale
            checked += 1
            bad = rel > tol if mode == COMPACT else rel <= tol
            if bad:
                failures.append({"case": rec.get("label"), "point": w["point"], "value": _c(val)})
    return WitnessCheck(not failures, checked, failures)
