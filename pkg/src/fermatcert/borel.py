"""Case analysis for Fermat-type identities sum_i z_i^(d - delta_i) Q_i(f) (nowhere zero or identically zero).

Every index partition allowed by the Borel-type structure theorems is turned
into polynomial equations in the ratios x_k = f_k / f_p, which are then solved
triangularly.  A case is rigid when the ratios are forced to be constant, when
the image is a line missing at least three points, or when it is a curve of
geometric genus at least two.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, UnresolvedCaseError
from .geometry import PlaneCurve, ProjPoint2, general_position3, geometric_genus
from .polynomial import HomPoly, MPoly, UniPoly, roots_with_multiplicity

__all__ = [
    "LOG",
    "COMPACT",
    "FermatDecomposition",
    "PartitionCase",
    "ConstraintSystem",
    "LineRecord",
    "CaseOutcome",
    "enumerate_cases",
    "case_constraints",
    "solve_case",
    "run_engine",
    "engine_verdict",
]

LOG = "logarithmic"
COMPACT = "compact"
NVARS = 5  # z0, z1, z2, c1, c2
C1, C2 = 3, 4
WITNESS_TOL = 1e-8
ZERO_TOL = 1e-9

SHAPES = {
    LOG: [(2, 1), (1, 2), (0, 3), (0, 1, 2)],
    COMPACT: [(1, 2), (0, 3)],
}
PARAM_SAMPLES = {LOG: {C1: 1.0, C2: 1.0}, COMPACT: {C1: 1.0, C2: -2.0}}
_ROMAN = ["i", "ii", "iii", "iv"]


def _check_mode(mode):
    if mode not in SHAPES:
        raise DomainError(f"unknown mode {mode!r}; expected {LOG!r} or {COMPACT!r}")


@dataclass(frozen=True)
class FermatDecomposition:
    """sum_i z_i^(d - delta_i) Q_i with deg Q_i = delta_i."""

    d: int
    deltas: tuple
    Qs: tuple
    mode: str
    check_general_position: bool = True

    def __post_init__(self):
        _check_mode(self.mode)
        if len(self.deltas) != 3 or len(self.Qs) != 3:
            raise DomainError("need three deltas and three Q polynomials")
        for dl, Q in zip(self.deltas, self.Qs):
            if not isinstance(Q, HomPoly) or Q.nvars != 3:
                raise DomainError("each Q must be a ternary form")
            if Q.deg != dl or dl < 0:
                raise DomainError(f"deg Q = {Q.deg} does not match delta = {dl}")
        total = sum(self.deltas)
        bound = 6 if self.mode == LOG else 3
        if not self.d > bound + total:
            raise DomainError(f"threshold violated: need d > {bound}+sum(delta) = {bound + total}, got d = {self.d}")
        if self.check_general_position:
            gp = general_position3(*self.divisors())
            if not gp:
                raise DomainError(f"divisors are not in general position (common zero {gp.common_zero})")

    def divisors(self):
        out = []
        for i, (dl, Q) in enumerate(zip(self.deltas, self.Qs)):
            e = [0, 0, 0]
            e[i] = self.d - dl
            out.append(HomPoly(3, {tuple(e): 1}) * Q)
        return out

    def defining(self):
        g = self.divisors()
        return g[0] + g[1] + g[2]


@dataclass(frozen=True)
class PartitionCase:
    mode: str
    blocks: tuple
    shape: tuple
    label: str

    @property
    def I0(self):
        return self.blocks[0]


def enumerate_cases(mode):
    """Every labelled index partition allowed in ``mode``."""
    _check_mode(mode)
    out = []
    for si, shape in enumerate(SHAPES[mode]):
        roman = _ROMAN[si]
        if shape == (0, 3):
            out.append(PartitionCase(mode, ((), (0, 1, 2)), shape, roman))
            continue
        if shape == (0, 1, 2):
            pairs = [(0, 1), (0, 2), (1, 2)]
            for k, pair in enumerate(pairs, 1):
                single = tuple(i for i in range(3) if i not in pair)
                out.append(PartitionCase(mode, ((), single, pair), shape, f"{roman}.{k}"))
            continue
        n0 = shape[0]
        firsts = [(0, 1), (0, 2), (1, 2)] if n0 == 2 else [(0,), (1,), (2,)]
        for k, I0 in enumerate(firsts, 1):
            rest = tuple(i for i in range(3) if i not in I0)
            out.append(PartitionCase(mode, (I0, rest), shape, f"{roman}.{k}"))
    return out


def _var(i):
    return MPoly.variable(NVARS, i)


@dataclass
class ConstraintSystem:
    case: PartitionCase
    pivot: int
    unknowns: tuple
    equations: list  # (MPoly, description)
    params: tuple
    param_conditions: list
    param_samples: dict
    nonvanishing: tuple
    global_constraint: str
    g: list  # the divisor forms, as 5-variable polynomials (not dehomogenized)

    def describe(self):
        lines = [f"pivot f{self.pivot}; unknowns " + ", ".join(f"x{u}" for u in self.unknowns)]
        lines += [desc for _, desc in self.equations]
        lines += self.param_conditions
        lines.append(self.global_constraint)
        return lines


def _pivot(case):
    if case.shape == (0, 1, 2):
        return case.blocks[2][0]
    blocks = [b for b in case.blocks[1:] if b]
    return max(blocks, key=len)[0]


def case_constraints(decomp, case):
    """Polynomial constraints on the ratios f_k / f_pivot for one case."""
    if case.mode != decomp.mode:
        raise DomainError("case mode does not match decomposition mode")
    p = _pivot(case)
    g = [G.embed(NVARS, [0, 1, 2]) for G in decomp.divisors()]
    gd = [G.substitute({p: 1}) for G in g]
    eqs = []
    for i in case.I0:
        eqs.append((gd[i], f"g{i} == 0"))
    params = []
    conds = []
    blocks = case.blocks[1:]
    log = case.mode == LOG
    for alpha, block in enumerate(blocks, 1):
        if len(block) < 2:
            continue
        base = block[0]
        others = block[1:]
        annihilated = (not log) or alpha != 1
        if annihilated and len(block) == 2:
            i = others[0]
            eqs.append((gd[i] + gd[base], f"g{i} == -1 * g{base}"))
        elif annihilated:
            # compact, all three indices: g_i = c_i g_base with 1 + c1 + c2 = 0
            for k, i in enumerate(others):
                c = C1 + k
                eqs.append((gd[i] - _var(c) * gd[base], f"g{i} == c{k + 1} * g{base}"))
                params.append(c)
            conds.append("1 + c1 + c2 == 0; c1 != 0; c2 != 0")
        else:
            for k, i in enumerate(others):
                c = C1 + k
                eqs.append((gd[i] - _var(c) * gd[base], f"g{i} == c{k + 1} * g{base}"))
                params.append(c)
            if len(others) == 1:
                conds.append("c1 != 0; c1 != -1")
            else:
                conds.append("c1 != 0; c2 != 0; 1 + c1 + c2 != 0")
    unknowns = tuple(k for k in range(3) if k != p)
    nonvanishing = tuple(i for i in range(3) if i not in case.I0)
    glob = "sum g nowhere zero" if log else "sum g identically zero"
    samples = {c: PARAM_SAMPLES[case.mode][c] for c in params}
    return ConstraintSystem(case, p, unknowns, eqs, tuple(params), conds, samples, nonvanishing, glob, g)


@dataclass
class LineRecord:
    """Projective line s * base + t * direction with the points it must avoid."""

    base: tuple
    direction: tuple
    punctures: list
    multiplicity: int = 1

    @property
    def k(self):
        return len(self.punctures)


@dataclass
class CaseOutcome:
    case: PartitionCase
    status: str
    witnesses: list = field(default_factory=list)  # (ProjPoint2, multiplicity)
    lines: list = field(default_factory=list)
    residual: PlaneCurve | None = None
    genus: object = None
    rigid: bool = True
    max_residual: float = 0.0
    notes: list = field(default_factory=list)
    system: ConstraintSystem | None = None

    @property
    def picard_points(self):
        if not self.lines:
            return None
        return min(self.lines, key=lambda ln: ln.k).punctures

    @property
    def witness_count(self):
        return sum(m for _, m in self.witnesses)


def _uniform(eq, v):
    """Some positive power of v has a nonzero pure-number coefficient."""
    for k, coef in eq.coefficients_in(v).items():
        if k >= 1 and coef.is_constant() and coef.constant_value() != 0:
            return True
    return False


def _unresolved(eq, unresolved):
    return {u for u in unresolved if eq.involves(u)}


def _value_scale(eq, values):
    pt = [values.get(i, 0) for i in range(NVARS)]
    return max(eq.abs_scale(pt), 1e-300)


def _restrict_to_line(G, base, direction):
    """Binary form G(s * base + t * direction) as a UniPoly in t (s = 1) plus its degree."""
    subs = [MPoly(1, {(0,): complex(b), (1,): complex(dv)}) for b, dv in zip(base, direction)]
    P = MPoly(3, G.terms).compose(subs)
    u = P.to_univariate(0) if not P.is_zero() else UniPoly()
    return u


def _line_punctures(G, base, direction, deg):
    u = _restrict_to_line(G, base, direction)
    if u.is_zero() or u.max_coeff() <= ZERO_TOL * G.max_coeff():
        return None
    u = u.trim(1e-12)
    pts = []
    if u.degree >= 1:
        for t, _ in roots_with_multiplicity(u, cluster_eps=1e-7):
            pts.append(ProjPoint2(tuple(np.array(base) + t * np.array(direction))))
    if u.degree < deg:
        pts.append(ProjPoint2(tuple(direction)))
    out = []
    for p in pts:
        if all(p.distance(q) > 1e-7 for q in out):
            out.append(p)
    out.sort(key=lambda p: p.key())
    return out


def _sum_form(system):
    g = system.g
    s = g[0] + g[1] + g[2]
    return MPoly(3, {e[:3]: c for e, c in s.terms.items()})


def _line_outcome_parts(system, base, direction, deg, mult=1):
    """LineRecord for a line candidate, or None when the line violates the case."""
    for i in system.nonvanishing:
        G = MPoly(3, {e[:3]: c for e, c in system.g[i].terms.items()})
        if _line_punctures(G, base, direction, deg) is None:
            return None
    S = _sum_form(system)
    if system.case.mode == LOG:
        pts = _line_punctures(S, base, direction, deg)
        if pts is None:
            return None
        return LineRecord(tuple(complex(b) for b in base), tuple(complex(v) for v in direction), pts, mult)
    return LineRecord(tuple(complex(b) for b in base), tuple(complex(v) for v in direction), [], mult)


def _homogenize(eq, pivot, deg):
    t = {}
    for e, c in eq.terms.items():
        f = list(e[:3])
        f[pivot] = deg - sum(f)
        if f[pivot] < 0:
            raise DomainError("equation degree exceeds the form degree")
        t[tuple(f)] = t.get(tuple(f), 0) + c
    return HomPoly(3, t, deg)


def solve_case(decomp, case, system=None, seed=0):
    """Resolve one case into witnesses, punctured lines, or a residual curve."""
    if system is None:
        system = case_constraints(decomp, case)
    p = system.pivot
    samples = system.param_samples
    # branches: (values, multiplicity, unresolved set, pending equations)
    start = {p: 1.0, **samples}
    branches = [(start, 1)]
    unresolved = set(system.unknowns)
    pending = list(system.equations)
    order = []
    while True:
        pick = None
        for idx, (eq, desc) in enumerate(pending):
            un = _unresolved(eq, unresolved)
            if len(un) == 1:
                (v,) = un
                if _uniform(eq, v):
                    pick = (idx, v)
                    break
        if pick is None:
            break
        idx, v = pick
        eq, desc = pending.pop(idx)
        order.append((v, desc))
        new = []
        for values, mult in branches:
            u = eq.substitute({k: val for k, val in values.items()}).to_univariate(v).trim(1e-12)
            for r, m in roots_with_multiplicity(u, seed=seed):
                nv = dict(values)
                nv[v] = r
                new.append((nv, mult * m))
        branches = new
        unresolved.discard(v)
    # equations with no unresolved unknown are consistency checks
    still = []
    for eq, desc in pending:
        if _unresolved(eq, unresolved):
            still.append((eq, desc))
            continue
        kept = []
        for values, mult in branches:
            val = eq.evaluate([values.get(i, 0) for i in range(NVARS)])
            if abs(val) <= ZERO_TOL * _value_scale(eq, values):
                kept.append((values, mult))
        branches = kept
    pending = still
    outcome = CaseOutcome(case, "inconsistent", system=system)
    outcome.notes.append("elimination order: " + "; ".join(f"x{v} from {d}" for v, d in order))
    if not branches:
        return outcome
    if not unresolved:
        return _constant_outcome(decomp, system, branches, outcome)
    if len(unresolved) == 1 and not pending:
        (v,) = unresolved
        lines = []
        for values, mult in branches:
            base = [0j, 0j, 0j]
            for k in range(3):
                if k != v:
                    base[k] = values[k]
            direction = [0j, 0j, 0j]
            direction[v] = 1.0
            rec = _line_outcome_parts(system, base, direction, decomp.d, mult)
            if rec is not None:
                lines.append(rec)
        return _line_outcome(lines, outcome)
    if len(unresolved) == 2 and len(pending) == 1 and len(branches) == 1:
        eq, desc = pending[0]
        if any(eq.involves(c) for c in (C1, C2)):
            raise UnresolvedCaseError(
                f"case {case.label}: residual equation depends on a ratio constant",
                label=case.label, partial=system.describe(),
            )
        H = _homogenize(eq.substitute({}), p, decomp.d)
        present = [k for k in range(3) if H.involves(k)]
        if len(present) <= 2:
            return _lines_from_binary(decomp, system, H, present, outcome)
        curve = PlaneCurve(H, name=f"residual {case.label}")
        rep = geometric_genus(curve, seed=seed)
        outcome.status = "residual-curve"
        outcome.residual = curve
        outcome.genus = rep
        outcome.rigid = bool(rep.irreducible) and rep.geometric_genus is not None and rep.geometric_genus >= 2
        outcome.notes.append(desc)
        return outcome
    raise UnresolvedCaseError(
        f"case {case.label}: system is not triangular", label=case.label, partial=system.describe()
    )


def _lines_from_binary(decomp, system, H, present, outcome):
    """Split a form in two variables into the lines through the missing coordinate point."""
    if len(present) < 2:
        raise UnresolvedCaseError(
            f"case {outcome.case.label}: degenerate residual equation", label=outcome.case.label
        )
    a, b = present
    (c,) = [k for k in range(3) if k not in present]
    u = np.zeros(H.deg + 1, dtype=complex)
    for e, v in H.terms.items():
        u[e[a]] += v
    poly = UniPoly(u)
    roots = roots_with_multiplicity(poly) if poly.degree >= 1 else []
    cand = []
    for nu, m in roots:
        base = [0j, 0j, 0j]
        base[a], base[b] = nu, 1.0
        cand.append((base, m))
    if poly.degree < H.deg:
        base = [0j, 0j, 0j]
        base[a] = 1.0
        cand.append((base, H.deg - poly.degree))
    lines = []
    for base, m in cand:
        direction = [0j, 0j, 0j]
        direction[c] = 1.0
        rec = _line_outcome_parts(system, base, direction, decomp.d, m)
        if rec is not None:
            lines.append(rec)
    outcome.notes.append("residual equation is a product of lines")
    return _line_outcome(lines, outcome)


def _line_outcome(lines, outcome):
    if not lines:
        outcome.status = "vacuous"
        return outcome
    lines.sort(key=lambda ln: ProjPoint2(ln.base).key())
    k = min(ln.k for ln in lines)
    outcome.status = f"line-minus-{k}-points"
    outcome.lines = lines
    outcome.rigid = k >= 3
    return outcome


def _constant_outcome(decomp, system, branches, outcome):
    log = system.case.mode == LOG
    g3 = [MPoly(3, {e[:3]: c for e, c in G.terms.items()}) for G in system.g]
    merged = {}
    worst = 0.0
    dropped = 0
    for values, mult in branches:
        w = np.array([values[k] for k in range(3)], dtype=complex)
        gv = np.array([G.evaluate(tuple(w)) for G in g3])
        gs = np.array([G.abs_scale(tuple(w)) for G in g3])
        if any(abs(gv[i]) <= ZERO_TOL * max(gs[i], 1e-300) for i in system.nonvanishing):
            dropped += 1
            continue
        big = np.max(np.abs(gv))
        ratio = abs(gv.sum()) / big
        if log and ratio <= WITNESS_TOL:
            dropped += 1
            continue
        if not log and ratio > WITNESS_TOL:
            dropped += 1
            continue
        pt = [values.get(i, 0) for i in range(NVARS)]
        for eq, _ in system.equations:
            worst = max(worst, abs(eq.evaluate(pt)) / max(eq.abs_scale(pt), 1e-300))
        P = ProjPoint2(tuple(w))
        for q in merged:
            if P.distance(q) <= 1e-9:
                merged[q] += mult
                break
        else:
            merged[P] = mult
    if not merged:
        outcome.status = "vacuous"
        outcome.notes.append(f"all {dropped} solutions violate the case conditions")
        return outcome
    outcome.status = "constant-witnesses"
    outcome.witnesses = sorted(merged.items(), key=lambda pm: pm[0].key(9))
    outcome.max_residual = worst
    if dropped:
        outcome.notes.append(f"{dropped} solutions excluded by the case conditions")
    return outcome


def run_engine(decomp, seed=0):
    """One outcome per case, in the canonical case order."""
    out = []
    for case in enumerate_cases(decomp.mode):
        try:
            out.append(solve_case(decomp, case, seed=seed))
        except UnresolvedCaseError as exc:
            if exc.label is None:
                exc.label = case.label
            raise
    return out


def engine_verdict(outcomes):
    return "rigid" if all(o.rigid for o in outcomes) else "not-rigid"


def witness_sum_ratio(decomp, point):
    """|sum g_i| / max |g_i| at a point."""
    gv = np.array([G.evaluate(tuple(point)) for G in decomp.divisors()])
    return float(abs(gv.sum()) / max(np.max(np.abs(gv)), 1e-300))


def genus_value(outcome):
    if outcome.genus is None:
        return None
    g = outcome.genus.geometric_genus
    return Fraction(g) if g is not None else None
