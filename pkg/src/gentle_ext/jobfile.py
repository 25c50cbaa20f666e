"""Line-oriented job files: parse, validate and print back."""
from __future__ import annotations

import copy
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import Field
from .quiver import ColoredQuiver, ColoringError, QuiverError, SignFunction, infer_coloring

CODES = {
    "E001": "syntax error",
    "E002": "unknown vertex",
    "E003": "unknown arrow",
    "E004": "duplicate key",
    "E005": "sign function violates the opposite-sign rule",
    "E006": "band parameter must be nonzero",
    "E007": "malformed number",
    "E008": "unknown option or color",
    "E009": "no coloring realizes the relations",
}


class ParseError(ValueError):
    def __init__(self, code: str, line: int, col: int, message: str):
        super().__init__(f"{code} line {line}, column {col}: {message}")
        self.code = code
        self.line = line
        self.col = col
        self.message = message


@dataclass
class JobFile:
    vertices: list[str] = field(default_factory=list)
    arrows: list[tuple] = field(default_factory=list)  # (id, tail, head, color or None)
    relations: list[tuple[str, str]] = field(default_factory=list)
    beta: dict[str, int] | None = None
    rank: dict[str, int] | None = None
    sign: dict[tuple[str, str], int] = field(default_factory=dict)
    lam: dict[int, Fraction] = field(default_factory=dict)
    mu: dict[int, Fraction] = field(default_factory=dict)
    theta: dict[int, tuple[str, int]] = field(default_factory=dict)
    field_name: str = "rational"
    depth: int | None = None
    relation_lines: dict = field(default_factory=dict, compare=False, repr=False)

    def quiver(self) -> ColoredQuiver:
        if self.arrows and self.arrows[0][3] is None:
            return infer_coloring(self.vertices, [a[:3] for a in self.arrows], self.relations)
        return ColoredQuiver(self.vertices, self.arrows)

    def coefficient_field(self) -> Field:
        return Field.parse(self.field_name)

    def sign_function(self, q: ColoredQuiver) -> SignFunction:
        """Given signs, completed by the opposite-sign rule, then the canonical choice."""
        m: dict[tuple[str, str], int] = {}
        for x in q.vertices:
            cols = q.colors_at(x)
            given = {s: self.sign[(x, s)] for s in cols if (x, s) in self.sign}
            if given:
                s0, e0 = next(iter(given.items()))
                for s in cols:
                    m[(x, s)] = e0 if s == s0 else -e0
            else:
                for k, s in enumerate(cols):
                    m[(x, s)] = 1 if k == 0 else -1
        return SignFunction.from_mapping(q, m)


_ID = re.compile(r"^[A-Za-z0-9_.\-']+$")
_NAT = re.compile(r"^\d+$")
_RAT = re.compile(r"^-?\d+(/\d+)?$")


def _tokens(line: str) -> list[tuple[str, int]]:
    out = []
    for m in re.finditer(r"\S+", line):
        out.append((m.group(), m.start() + 1))
    return out


def _split_kv(tok: str, col: int, lineno: int, sep: str = "=") -> tuple[str, str]:
    if sep not in tok:
        raise ParseError("E001", lineno, col, f"expected key{sep}value, got {tok!r}")
    k, v = tok.split(sep, 1)
    if not k or not v:
        raise ParseError("E001", lineno, col, f"expected key{sep}value, got {tok!r}")
    return k, v


def _nat(v: str, lineno: int, col: int) -> int:
    if not _NAT.match(v):
        raise ParseError("E007", lineno, col, f"expected a natural number, got {v!r}")
    return int(v)


def _rat(v: str, lineno: int, col: int) -> Fraction:
    if not _RAT.match(v):
        raise ParseError("E007", lineno, col, f"expected a rational number, got {v!r}")
    try:
        return Fraction(v)
    except ZeroDivisionError:
        raise ParseError("E007", lineno, col, "zero denominator") from None


def _check_id(tok: str, lineno: int, col: int) -> str:
    if not _ID.match(tok):
        raise ParseError("E001", lineno, col, f"invalid identifier {tok!r}")
    return tok


def _parse_line(job: JobFile, toks: list[tuple[str, int]], lineno: int, seen: set) -> None:
    kw, kcol = toks[0]
    args = toks[1:]
    vset = set(job.vertices)
    aset = {a[0] for a in job.arrows}

    def dup(key, col):
        if key in seen:
            raise ParseError("E004", lineno, col, f"duplicate {key[0]} entry {key[1]!r}")
        seen.add(key)

    if kw == "vertex":
        if len(args) != 1:
            raise ParseError("E001", lineno, kcol, "usage: vertex <id>")
        v, col = args[0]
        _check_id(v, lineno, col)
        dup(("vertex", v), col)
        job.vertices.append(v)
    elif kw == "arrow":
        if len(args) not in (3, 4):
            raise ParseError("E001", lineno, kcol, "usage: arrow <id> <tail> <head> [<color>]")
        (aid, c0), (t, c1), (h, c2) = args[:3]
        _check_id(aid, lineno, c0)
        dup(("arrow", aid), c0)
        for v, c in ((t, c1), (h, c2)):
            if v not in vset:
                raise ParseError("E002", lineno, c, f"unknown vertex {v!r}")
        color = args[3][0] if len(args) == 4 else None
        if color is not None:
            _check_id(color, lineno, args[3][1])
        if job.arrows and (job.arrows[0][3] is None) != (color is None):
            raise ParseError("E001", lineno, kcol, "either every arrow has a color or none does")
        job.arrows.append((aid, t, h, color))
    elif kw == "relation":
        if len(args) != 2:
            raise ParseError("E001", lineno, kcol, "usage: relation <first-arrow> <second-arrow>")
        for a, c in args:
            if a not in aset:
                raise ParseError("E003", lineno, c, f"unknown arrow {a!r}")
        pair = (args[0][0], args[1][0])
        dup(("relation", pair), kcol)
        head = next(a[2] for a in job.arrows if a[0] == pair[0])
        tail = next(a[1] for a in job.arrows if a[0] == pair[1])
        if head != tail:
            raise ParseError("E009", lineno, args[1][1],
                             f"{pair[1]} does not start where {pair[0]} ends")
        job.relations.append(pair)
        job.relation_lines[pair] = lineno
    elif kw in ("beta", "rank"):
        target = job.beta if kw == "beta" else job.rank
        if target is None:
            target = {}
            if kw == "beta":
                job.beta = target
            else:
                job.rank = target
        for tok, col in args:
            k, v = _split_kv(tok, col, lineno)
            if kw == "beta" and k not in vset:
                raise ParseError("E002", lineno, col, f"unknown vertex {k!r}")
            if kw == "rank" and k not in aset:
                raise ParseError("E003", lineno, col, f"unknown arrow {k!r}")
            dup((kw, k), col)
            target[k] = _nat(v, lineno, col + len(k) + 1)
    elif kw == "sign":
        try:
            q = job.quiver()
        except ColoringError as exc:
            raise ParseError("E009", lineno, kcol, str(exc)) from None
        for tok, col in args:
            k, v = _split_kv(tok, col, lineno)
            x, s = _split_kv(k, col, lineno, ":")
            if x not in vset:
                raise ParseError("E002", lineno, col, f"unknown vertex {x!r}")
            if s not in q.colors_at(x):
                raise ParseError("E008", lineno, col, f"color {s!r} does not meet vertex {x!r}")
            if v not in ("+", "-", "+1", "-1"):
                raise ParseError("E001", lineno, col, f"sign must be + or -, got {v!r}")
            dup(("sign", (x, s)), col)
            e = 1 if v.startswith("+") else -1
            for (x2, s2), e2 in job.sign.items():
                if x2 == x and s2 != s and e2 == e:
                    raise ParseError("E005", lineno, col,
                                     f"colors {s2!r} and {s!r} at vertex {x!r} need opposite signs")
            job.sign[(x, s)] = e
    elif kw in ("lambda", "mu"):
        target = job.lam if kw == "lambda" else job.mu
        for tok, col in args:
            k, v = _split_kv(tok, col, lineno)
            b = _nat(k, lineno, col)
            dup((kw, b), col)
            val = _rat(v, lineno, col + len(k) + 1)
            if val == 0:
                raise ParseError("E006", lineno, col, f"{kw} for band {b} must be nonzero")
            target[b] = val
    elif kw == "theta":
        for tok, col in args:
            k, v = _split_kv(tok, col, lineno)
            b = _nat(k, lineno, col)
            x, i = _split_kv(v, col, lineno, ":")
            if x not in vset:
                raise ParseError("E002", lineno, col, f"unknown vertex {x!r}")
            dup(("theta", b), col)
            job.theta[b] = (x, _nat(i, lineno, col))
    elif kw == "option":
        for tok, col in args:
            k, v = _split_kv(tok, col, lineno)
            dup(("option", k), col)
            if k == "field":
                try:
                    Field.parse(v)
                except ValueError as exc:
                    raise ParseError("E008", lineno, col, str(exc)) from None
                job.field_name = v
            elif k == "depth":
                d = _nat(v, lineno, col + len(k) + 1)
                if d < 2:
                    raise ParseError("E007", lineno, col, "depth must be at least 2")
                job.depth = d
            else:
                raise ParseError("E008", lineno, col, f"unknown option {k!r}")
    else:
        raise ParseError("E001", lineno, kcol, f"unknown keyword {kw!r}")


def parse_job(text: str) -> JobFile:
    job = JobFile()
    seen: set = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if toks:
            _parse_line(job, toks, lineno, seen)
    if not job.vertices:
        raise ParseError("E001", 1, 1, "no vertices declared")
    try:
        job.quiver()
    except ColoringError as exc:
        w = tuple(exc.witness or ())
        line = job.relation_lines.get(w, max(job.relation_lines.values(), default=1))
        raise ParseError("E009", line, 1, str(exc)) from None
    except QuiverError as exc:
        raise ParseError("E001", 1, 1, str(exc)) from None
    return job


def apply_override(job: JobFile, keyword: str, text: str) -> JobFile:
    """Replace one section of the job by ``<keyword> <text>`` (used by CLI flags)."""
    out = copy.deepcopy(job)
    if keyword == "beta":
        out.beta = None
    elif keyword == "rank":
        out.rank = None
    elif keyword == "sign":
        out.sign = {}
    elif keyword == "lambda":
        out.lam = {}
    elif keyword == "mu":
        out.mu = {}
    elif keyword == "theta":
        out.theta = {}
    _parse_line(out, _tokens(f"{keyword} {text}"), 0, set())
    return out


def _fmt_frac(x: Fraction) -> str:
    return str(x)


def format_job(job: JobFile) -> str:
    lines = [f"vertex {v}" for v in job.vertices]
    for aid, t, h, c in job.arrows:
        lines.append(f"arrow {aid} {t} {h}" + (f" {c}" if c is not None else ""))
    for a, b in job.relations:
        lines.append(f"relation {a} {b}")
    if job.beta is not None:
        lines.append("beta " + " ".join(f"{k}={v}" for k, v in job.beta.items()))
    if job.rank is not None:
        lines.append("rank " + " ".join(f"{k}={v}" for k, v in job.rank.items()))
    if job.sign:
        lines.append("sign " + " ".join(f"{x}:{s}={'+' if e == 1 else '-'}"
                                        for (x, s), e in job.sign.items()))
    if job.lam:
        lines.append("lambda " + " ".join(f"{b}={_fmt_frac(v)}" for b, v in job.lam.items()))
    if job.mu:
        lines.append("mu " + " ".join(f"{b}={_fmt_frac(v)}" for b, v in job.mu.items()))
    if job.theta:
        lines.append("theta " + " ".join(f"{b}={x}:{i}" for b, (x, i) in job.theta.items()))
    if job.field_name != "rational":
        lines.append(f"option field={job.field_name}")
    if job.depth is not None:
        lines.append(f"option depth={job.depth}")
    return "\n".join(lines) + "\n"
