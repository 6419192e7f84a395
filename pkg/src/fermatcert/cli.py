"""Command-line front end.

Exit codes: 0 success, 2 hypotheses not met / check failed, 3 unresolved or
contour trouble, 4 resource cap, 64 usage or input error, 70 internal error.
"""
from __future__ import annotations

import argparse
import io
import re
import sys
from fractions import Fraction

from . import __version__
from .borel import COMPACT, LOG, FermatDecomposition, enumerate_cases, solve_case
from .config import FORMATS, applied, load_config
from .errors import (
    ContourError,
    DomainError,
    FermatCertError,
    NumericError,
    ResourceError,
    UnresolvedCaseError,
)
from .nevanlinna import HoloMap, RGrid, verify_cartan_smt, verify_fmt, verify_pullback_order, write_trace
from .textformat import emit_document, format_poly, parse_complex, parse_map, parse_poly
from .theorems import NOT_MET, UNRESOLVED, VERIFIED, build_Pn, check_theorem_a, check_theorem_b

EXIT_OK, EXIT_NOT_MET, EXIT_UNRESOLVED, EXIT_RESOURCE, EXIT_USAGE, EXIT_INTERNAL = 0, 2, 3, 4, 64, 70
VERDICT_EXIT = {VERIFIED: EXIT_OK, NOT_MET: EXIT_NOT_MET, UNRESOLVED: EXIT_UNRESOLVED}
MODES = {"logarithmic": LOG, "log": LOG, "compact": COMPACT}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


_RATIONAL = re.compile(r"[+-]?\d+(/[1-9]\d*)?")


def _complex_arg(text):
    if _RATIONAL.fullmatch(text.strip()):
        return Fraction(text.strip())  # exact-scalar path
    try:
        return parse_complex(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _deltas_arg(text):
    try:
        out = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad delta list {text!r}") from exc
    if len(out) != 3:
        raise argparse.ArgumentTypeError("need three comma-separated deltas")
    return out


def _grid_arg(text):
    try:
        r0, r1, n = text.split(":")
        return float(r0), float(r1), int(n)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("grid is r0:r1:count") from exc


def build_parser():
    # shared options are accepted before or after the subcommand
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON run config (default: $FERMATCERT_CONFIG)")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--output", "-o", help="write the main result here instead of stdout")
    common.add_argument("--format", choices=FORMATS, dest="output_format")
    p = _Parser(prog="fermatcert", description="Hyperbolicity certificates for Fermat-type plane curves.", parents=[common])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **k: _add(*a, parents=[common], **k)

    a = sub.add_parser("check-theorem-a", help="z0^d + z1^d + z2^(d-2)(eps0 z0^2 + eps1 z1^2 + z2^2)")
    a.add_argument("--d", type=int, required=True)
    a.add_argument("--eps0", type=_complex_arg, required=True)
    a.add_argument("--eps1", type=_complex_arg, required=True)

    b = sub.add_parser("check-theorem-b", help="P(z0, z1) = a P(b z1, z2)")
    b.add_argument("--a", type=_complex_arg, required=True)
    b.add_argument("--b", type=_complex_arg, required=True)
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--e", type=int, required=True)

    c = sub.add_parser("borel-cases", help="resolve every partition case for a Fermat decomposition")
    _decomp_args(c)

    n = sub.add_parser("nevanlinna", help="value-distribution traces")
    n.add_argument("check", choices=("fmt", "smt", "pullback"))
    n.add_argument("--map", required=True, dest="map_file", help="one component per line")
    n.add_argument("--divisor", help="fmt: the form Q, in polynomial text format")
    n.add_argument("--hyperplanes", help="smt: file with one linear form per line")
    n.add_argument("--grid", type=_grid_arg, default=(4.0, 100.0, 20), help="r0:r1:count, geometric")
    n.add_argument("--nodes", type=int, default=64)
    _decomp_args(n, required=False)

    x = sub.add_parser("build-xn", help="the tower polynomial P_n")
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--d", type=int, required=True)
    x.add_argument("--e", type=int, required=True)
    return p


def _decomp_args(p, required=True):
    p.add_argument("--mode", choices=sorted(MODES), required=required)
    p.add_argument("--d", type=int, required=required)
    p.add_argument("--deltas", type=_deltas_arg, required=required)
    p.add_argument("--q-file", dest="q_file", required=required, help="three forms, one per line")


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc


def _load_decomp(args):
    lines = [ln for ln in _read(args.q_file).splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) != 3:
        raise DomainError("the Q-file needs exactly three lines")
    Qs = []
    for text, dl in zip(lines, args.deltas):
        Q = parse_poly(text, nvars=3)
        if Q.is_zero():
            raise DomainError("Q forms must be nonzero")
        if Q.deg != dl:
            raise DomainError(f"form {text!r} has degree {Q.deg}, expected {dl}")
        Qs.append(Q)
    return MODES[args.mode], Qs


def _emit(text, cfg, out):
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


def _human(cert):
    lines = [f"theorem {cert.theorem}: {cert.verdict}"]
    for k, v in cert.parameters.items():
        lines.append(f"  {k} = {v}")
    for chk in cert.hypothesis_checks:
        lines.append(f"  [{chk.status}] {chk.name}")
    for rec in cert.case_records:
        lines.append(f"  case {rec['label']}: {rec['status']} ({rec['witness_count']} witnesses)")
    for g in cert.genus_records:
        lines.append(f"  genus {g['genus']}: {g['curve']}")
    lines += [f"  note: {n}" for n in cert.notes]
    return "\n".join(lines) + "\n"


def _certificate(cert, cfg, out):
    text = emit_document(cert.to_dict()) if cfg.output_format == "structured-text" else _human(cert)
    _emit(text, cfg, out)
    return VERDICT_EXIT[cert.verdict]


def cmd_check_theorem_a(args, cfg, out):
    return _certificate(check_theorem_a(args.d, args.eps0, args.eps1, seed=cfg.seed), cfg, out)


def cmd_check_theorem_b(args, cfg, out):
    if args.a == 0:
        raise DomainError("a must be nonzero")
    cert = check_theorem_b(args.a, args.b, args.d, args.e, seed=cfg.seed)
    code = _certificate(cert, cfg, out)
    print(f"branch ({cert.parameters['branch']}): {cert.verdict}", file=sys.stderr)
    return code


def cmd_borel_cases(args, cfg, out):
    mode, Qs = _load_decomp(args)
    try:
        decomp = FermatDecomposition(args.d, args.deltas, tuple(Qs), mode)
    except DomainError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NOT_MET
    rows = [("label", "blocks", "status", "witnesses")]
    code = EXIT_OK
    for case in enumerate_cases(mode):
        blocks = "|".join("".join(str(i) for i in b) or "-" for b in case.blocks)
        try:
            o = solve_case(decomp, case, seed=cfg.seed)
            rows.append((case.label, blocks, o.status, str(o.witness_count)))
        except UnresolvedCaseError:
            rows.append((case.label, blocks, "unresolved", "0"))
            code = EXIT_UNRESOLVED
    width = [max(len(r[i]) for r in rows) for i in range(4)]
    text = "".join("  ".join(c.ljust(w) for c, w in zip(r, width)).rstrip() + "\n" for r in rows)
    _emit(text, cfg, out)
    return code


def cmd_nevanlinna(args, cfg, out):
    f = HoloMap(parse_map(_read(args.map_file)))
    r0, r1, count = args.grid
    grid = RGrid(list(_geom(r0, r1, count)), args.nodes)
    if args.check == "fmt":
        if not args.divisor:
            raise DomainError("fmt needs --divisor")
        rep = verify_fmt(f, parse_poly(args.divisor, nvars=3), grid, seed=cfg.seed)
    elif args.check == "smt":
        if not args.hyperplanes:
            raise DomainError("smt needs --hyperplanes")
        H = [parse_poly(ln, nvars=3) for ln in _read(args.hyperplanes).splitlines() if ln.strip()]
        rep = verify_cartan_smt(f, H, grid, seed=cfg.seed)
    else:
        if not (args.mode and args.d and args.deltas and args.q_file):
            raise DomainError("pullback needs --mode, --d, --deltas and --q-file")
        mode, Qs = _load_decomp(args)
        decomp = FermatDecomposition(args.d, args.deltas, tuple(Qs), mode)
        rep = verify_pullback_order(f, decomp, grid, seed=cfg.seed)
    buf = io.StringIO()
    write_trace(rep, buf)
    _emit(buf.getvalue(), cfg, out)
    summary = ", ".join(f"{k}={v}" for k, v in rep.summary.items())
    print(f"{'PASS' if rep.passed else 'FAIL'} {args.check}: {summary}", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_NOT_MET


def _geom(r0, r1, n):
    if n < 2:
        return [r0]
    q = (r1 / r0) ** (1 / (n - 1))
    return [r0 * q**k for k in range(n)]


def cmd_build_xn(args, cfg, out):
    P = build_Pn(args.n, args.d, args.e, cap=cfg.term_cap)
    _emit(format_poly(P) + "\n", cfg, out)
    print(f"terms: {len(P.terms)}", file=sys.stderr)
    print(f"degree: {P.deg}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "check-theorem-a": cmd_check_theorem_a,
    "check-theorem-b": cmd_check_theorem_b,
    "borel-cases": cmd_borel_cases,
    "nevanlinna": cmd_nevanlinna,
    "build-xn": cmd_build_xn,
}


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(getattr(args, "config", None))
        for name in ("seed", "output", "output_format"):
            if getattr(args, name, None) is not None:
                setattr(cfg, name, getattr(args, name))
    except UsageError as exc:
        print(f"fermatcert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"fermatcert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        with applied(cfg):
            return COMMANDS[args.command](args, cfg, out)
    except ResourceError as exc:
        print(f"fermatcert: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ContourError as exc:
        print(f"fermatcert: contour: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except DomainError as exc:
        print(f"fermatcert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, FermatCertError) as exc:
        print(f"fermatcert: internal: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - exit-code contract
        print(f"fermatcert: internal: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
