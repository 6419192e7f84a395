"""Plain-text interchange: polynomials, map files, certificates and complex scalars.

Polynomial terms are ``c * z0^i z1^j z2^k`` joined by ``+``; ``c`` is an
integer, a real, or a complex pair ``(re,im)``.  Map-file components use the
same idea with a single variable ``z`` and an optional ``exp[...]`` factor
whose bracket holds a polynomial in ``z``.
"""
from __future__ import annotations

import json
import math
import re
from functools import lru_cache
from fractions import Fraction

import numpy as np
import yaml

from .entire import EntireFn
from .errors import DomainError
from .polynomial import HomPoly, MPoly, UniPoly

__all__ = [
    "parse_complex",
    "format_coeff",
    "format_poly",
    "parse_poly",
    "format_entire",
    "parse_entire",
    "parse_map",
    "emit_document",
    "parse_document",
]

_COMPLEX_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def parse_complex(text):
    """'1', '-0.5', '2i', '1+2i', '(1,2)' -> complex.  Raises DomainError."""
    s = str(text).strip().replace(" ", "")
    if not s:
        raise DomainError("empty scalar")
    if s.startswith("(") and s.endswith(")"):
        parts = s[1:-1].split(",")
        if len(parts) != 2:
            raise DomainError(f"bad complex pair {text!r}")
        return complex(_real(parts[0]), _real(parts[1]))
    if s.endswith(("i", "j")):
        body = s[:-1]
        # split at the last sign that is not an exponent sign
        k = max((m.start() for m in re.finditer(r"(?<![eE])[+-]", body)), default=-1)
        if k <= 0:
            im = body if body not in ("", "+", "-") else body + "1"
            return complex(0.0, _real(im))
        re_part, im = body[:k], body[k:]
        if im in ("+", "-"):
            im += "1"
        return complex(_real(re_part), _real(im))
    return complex(_real(s), 0.0)


def _real(s):
    s = s.strip()
    if not _COMPLEX_RE.match(s):
        raise DomainError(f"cannot parse number {s!r}")
    return float(s)


def _fmt_float(x):
    return format(float(x), ".17g")


def format_coeff(c):
    if isinstance(c, (int, np.integer)) and not isinstance(c, bool):
        return str(int(c))
    c = complex(c)
    return f"({_fmt_float(c.real)},{_fmt_float(c.imag)})"


def _split_terms(text):
    """Split on '+' at bracket depth 0, skipping exponent signs."""
    out, depth, cur = [], 0, []
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "+" and depth == 0 and not (i > 0 and text[i - 1] in "eE" and i > 1 and text[i - 2].isdigit()):
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [t.strip() for t in out if t.strip()]


def _parse_coeff(tok):
    tok = tok.strip()
    if tok.startswith("("):
        return parse_complex(tok)
    if re.fullmatch(r"[+-]?\d+", tok):
        return int(tok)
    return parse_complex(tok)


def format_poly(P):
    """Text form of a multivariate polynomial, terms in descending exponent order."""
    if P.is_zero():
        return "0"
    parts = []
    for e in sorted(P.terms, reverse=True):
        mono = " ".join(f"z{i}^{k}" for i, k in enumerate(e) if k)
        c = format_coeff(P.terms[e])
        parts.append(f"{c} * {mono}" if mono else c)
    return " + ".join(parts)


_VAR_RE = re.compile(r"z(\d+)(?:\^(\d+))?")


def parse_poly(text, nvars=None, homogeneous=True):
    """Inverse of :func:`format_poly`.  ``nvars`` defaults to 1 + the largest index seen."""
    body = re.sub(r"\s+", " ", text.strip())
    if body in ("", "0"):
        if nvars is None:
            raise DomainError("cannot infer the number of variables of the zero polynomial")
        return HomPoly(nvars, {}, 0) if homogeneous else MPoly(nvars)
    raw = []
    top = 0
    for term in _split_terms(body):
        if "*" in term:
            ctext, mono = term.split("*", 1)
        elif _VAR_RE.fullmatch(term.replace(" ", "")) or term.strip().startswith("z"):
            ctext, mono = "1", term
        else:
            ctext, mono = term, ""
        c = _parse_coeff(ctext)
        exps = {}
        mono = mono.replace("*", " ")
        for tok in mono.split():
            m = _VAR_RE.fullmatch(tok)
            if not m:
                raise DomainError(f"bad monomial factor {tok!r}")
            i, k = int(m.group(1)), int(m.group(2) or 1)
            exps[i] = exps.get(i, 0) + k
            top = max(top, i + 1)
        raw.append((exps, c))
    n = nvars if nvars is not None else max(top, 1)
    if top > n:
        raise DomainError(f"variable z{top - 1} out of range for {n} variables")
    acc = MPoly(n)
    for exps, c in raw:
        e = tuple(exps.get(i, 0) for i in range(n))
        acc = acc + MPoly(n, {e: c})
    if homogeneous:
        return HomPoly.from_mpoly(acc) if not acc.is_zero() else HomPoly(n, {}, 0)
    return acc


# -- entire functions ---------------------------------------------------------


def _format_uni(p, var="z"):
    parts = []
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        parts.append(format_coeff(c) + (f" * {var}^{k}" if k else ""))
    return " + ".join(parts) if parts else "0"


def format_entire(fn):
    """Each term p(z) exp(q(z)) is written as monomials c * z^k, with ' * exp[q]' when q != 0."""
    if fn.is_zero():
        return "0"
    parts = []
    for p, q in fn.terms:
        tail = "" if q.degree <= 0 else f" * exp[{_format_uni(q)}]"
        for k, c in enumerate(p.coeffs):
            if c == 0:
                continue
            parts.append(format_coeff(c) + (f" * z^{k}" if k else "") + tail)
    return " + ".join(parts)


def _parse_uni(text):
    coeffs = {}
    for term in _split_terms(text):
        if "*" in term:
            ctext, mono = term.split("*", 1)
        elif term.strip().startswith("z"):
            ctext, mono = "1", term
        else:
            ctext, mono = term, ""
        mono = mono.strip()
        k = 0
        if mono:
            m = re.fullmatch(r"z(?:\^(\d+))?", mono.replace(" ", ""))
            if not m:
                raise DomainError(f"bad factor {mono!r}")
            k = int(m.group(1) or 1)
        coeffs[k] = coeffs.get(k, 0) + complex(_parse_coeff(ctext))
    c = np.zeros(max(coeffs, default=0) + 1, dtype=complex)
    for k, v in coeffs.items():
        c[k] += v
    return UniPoly(c)


def parse_entire(text):
    text = text.strip()
    if text in ("", "0"):
        return EntireFn()
    terms = []
    for term in _split_terms(text):
        q = UniPoly()
        m = re.search(r"\*?\s*exp\[(.*)\]\s*$", term)
        if m:
            q = _parse_uni(m.group(1))
            term = term[: m.start()].strip()
        if term.endswith("*"):
            term = term[:-1].strip()
        p = _parse_uni(term) if term else UniPoly([1.0])
        terms.append((p, q))
    return EntireFn(terms)


def parse_map(text):
    """Map file: one component per non-empty, non-comment line."""
    comps = [parse_entire(ln) for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not comps:
        raise DomainError("map file has no components")
    return tuple(comps)


# -- certificate documents ----------------------------------------------------

_KEY_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _scalar(v):
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, Fraction):
        return _quote(f"{v.numerator}/{v.denominator}") if v.denominator != 1 else str(v.numerator)
    if isinstance(v, (float, np.floating)):
        x = float(v)
        if math.isnan(x):
            return ".nan"
        if math.isinf(x):
            return ".inf" if x > 0 else "-.inf"
        s = _fmt_float(x)
        if "e" in s and "." not in s.split("e")[0]:
            mant, ex = s.split("e")
            s = f"{mant}.0e{ex}"
        elif "e" not in s and "." not in s:
            s += ".0"
        return s
    if isinstance(v, str):
        return _quote(v)
    raise DomainError(f"cannot serialize {type(v).__name__}")


def _quote(s):
    """Double-quoted string; JSON escapes, except astral characters use YAML's \\U form."""
    return '"' + "".join(f"\\U{ord(ch):08x}" if ord(ch) > 0xFFFF else json.dumps(ch)[1:-1] for ch in s) + '"'


def _is_scalar(v):
    return not isinstance(v, (dict, list, tuple, complex))


def _key(k):
    k = str(k)
    return k if _KEY_RE.fullmatch(k) and _plain_key_ok(k) else _quote(k)


@lru_cache(maxsize=None)
def _plain_key_ok(k):
    # YAML 1.1 resolves words such as "no" or "FALSE" to non-strings
    return yaml.safe_load(f"{k}: 0") == {k: 0}


def _emit(v, indent, out):
    pad = " " * indent
    if isinstance(v, complex):
        v = [v.real, v.imag]
    if isinstance(v, dict):
        for k, x in v.items():
            if isinstance(x, complex):
                x = [x.real, x.imag]
            if _is_scalar(x):
                out.append(f"{pad}{_key(k)}: {_scalar(x)}")
            elif not x:
                out.append(f"{pad}{_key(k)}: {'{}' if isinstance(x, dict) else '[]'}")
            elif isinstance(x, (list, tuple)) and all(_is_scalar(y) for y in x):
                out.append(f"{pad}{_key(k)}: [" + ", ".join(_scalar(y) for y in x) + "]")
            else:
                out.append(f"{pad}{_key(k)}:")
                _emit(x, indent + 2, out)
    elif isinstance(v, (list, tuple)):
        for x in v:
            if isinstance(x, complex):
                x = [x.real, x.imag]
            if _is_scalar(x):
                out.append(f"{pad}- {_scalar(x)}")
            elif not x:
                out.append(f"{pad}- {'{}' if isinstance(x, dict) else '[]'}")
            elif isinstance(x, (list, tuple)) and all(_is_scalar(y) for y in x):
                out.append(f"{pad}- [" + ", ".join(_scalar(y) for y in x) + "]")
            else:
                sub = []
                _emit(x, indent + 2, sub)
                sub[0] = pad + "- " + sub[0][indent + 2:]
                out.extend(sub)
    else:
        out.append(pad + _scalar(v))


def emit_document(data):
    """Indented ``key: value`` text; a subset of YAML, deterministic byte for byte."""
    if not isinstance(data, dict):
        raise DomainError("document root must be a mapping")
    out = []
    _emit(data, 0, out)
    return "\n".join(out) + "\n"


def parse_document(text):
    data = yaml.safe_load(text)
    if not isinstance(data, dict):
        raise DomainError("not a certificate document")
    return data
