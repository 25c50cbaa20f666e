"""Command-line front end: ``gentle-ext <command> <jobfile> [overrides]``.

Exit codes: 0 success, 1 domain error, 2 parse error, 3 failed internal cross-check.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .ext import CrossCheckError, build_ext_graph, canonical_decomposition_report, ext_between
from .graph import build_updown_graph, classify_vertices, to_dot, vname
from .jobfile import JobFile, ParseError, apply_override, parse_job
from .module import ModuleError, build_module, default_parameters, verify_rank_stratum, verify_relations
from .quiver import ColoredQuiver, NotFiniteDimensional, QuiverError, check_gentle
from .ranks import as_beta, as_rank, enumerate_maximal_rank_maps, is_maximal, validate_rank_map
from .resolution import ResolutionError, build_resolution, verify_resolution

COMMANDS = ("check", "components", "graph", "module", "resolve", "ext", "canon", "selftest")
OVERRIDES = (("beta", "beta"), ("rank", "rank"), ("sign", "sign"), ("lambda", "lambda"),
             ("mu", "mu"), ("theta", "theta"))


class DomainError(ValueError):
    pass


def _exact(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _exact(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_exact(v) for v in x]
    return x


# -- job helpers ------------------------------------------------------------------------

def _quiver(job: JobFile) -> ColoredQuiver:
    q = job.quiver()
    rep = check_gentle(q)
    if not rep.ok:
        msgs = "; ".join(f"{v.axiom}: {v.message}" for v in rep.violations)
        raise DomainError(f"quiver is not gentle: {msgs}")
    return q


def _beta(job: JobFile, q: ColoredQuiver) -> dict[str, int]:
    if job.beta is None:
        raise DomainError("this command needs a beta section")
    return as_beta(q, {x: job.beta.get(x, 0) for x in q.vertices})


def _rank_maps(job: JobFile, q: ColoredQuiver, beta: dict[str, int]) -> list[dict[str, int]]:
    """The given rank map (validated), or every maximal one."""
    if job.rank is None:
        return [rm.as_dict() for rm in enumerate_maximal_rank_maps(q, beta)]
    r = as_rank(q, {a.id: job.rank.get(a.id, 0) for a in q.arrows})
    bad = validate_rank_map(q, beta, r)
    if bad is not None:
        raise DomainError(f"invalid rank map: {bad.message}")
    return [r]


# -- commands --------------------------------------------------------------------------

def cmd_check(job: JobFile, args) -> tuple[dict, int]:
    q = job.quiver()
    rep = check_gentle(q)
    out = rep.to_dict()
    out["vertices"] = list(q.vertices)
    out["colors"] = {a.id: a.color for a in q.arrows}
    out["relations"] = [f"{b}{a}" for a, b in q.relations()]
    return out, 0 if rep.ok else 1


def cmd_components(job: JobFile, args) -> tuple[dict, int]:
    q = _quiver(job)
    beta = _beta(job, q)
    eps = job.sign_function(q)
    rows = []
    for r in _rank_maps(job, q, beta):
        g = build_updown_graph(q, beta, r, eps)
        rows.append({
            "rank": r,
            "maximal": is_maximal(q, beta, r),
            "components": [c.word_str() for c in g.components()],
            "bands": len(g.bands()),
        })
    return {"beta": beta, "rank_maps": rows, "count": len(rows)}, 0


def cmd_graph(job: JobFile, args) -> tuple[dict, int]:
    q = _quiver(job)
    beta = _beta(job, q)
    eps = job.sign_function(q)
    rows, dots = [], []
    for k, r in enumerate(_rank_maps(job, q, beta)):
        g = build_updown_graph(q, beta, r, eps)
        rows.append({
            "rank": r,
            "edges": [{"arrow": e.arrow, "tail": vname(e.tail), "head": vname(e.head)} for e in g.edges],
            "components": [c.to_dict() for c in g.components()],
            "classification": classify_vertices(g).to_dict(),
        })
        dots.append(to_dot(g, f"updown{k}"))
    if args.dot:
        _write(args.dot, "".join(dots))
    return {"beta": beta, "sign": _sign_dict(eps), "graphs": rows}, 0


def _sign_dict(eps) -> dict[str, int]:
    return {f"{x}:{s}": e for (x, s), e in sorted(eps.as_dict().items())}


def cmd_module(job: JobFile, args) -> tuple[dict, int]:
    q = _quiver(job)
    beta = _beta(job, q)
    eps = job.sign_function(q)
    fld = job.coefficient_field()
    rows = []
    for r in _rank_maps(job, q, beta):
        g = build_updown_graph(q, beta, r, eps)
        params = default_parameters(g, job.lam or None, job.theta or None)
        m = build_module(g, params)
        rel = verify_relations(m)
        strat = verify_rank_stratum(m, r, fld)
        if rel is not None or strat is not None:
            raise CrossCheckError(f"module check failed: relation {rel}, rank {strat}")
        d = m.to_dict()
        d.update(rank=r, parameters=params.to_dict())
        rows.append(d)
    return {"modules": rows}, 0


def cmd_resolve(job: JobFile, args) -> tuple[dict, int]:
    q = _quiver(job)
    beta = _beta(job, q)
    eps = job.sign_function(q)
    fld = job.coefficient_field()
    rows = []
    for r in _rank_maps(job, q, beta):
        g = build_updown_graph(q, beta, r, eps)
        m = build_module(g, default_parameters(g, job.lam or None, job.theta or None))
        res = build_resolution(g, m, job.depth)
        cert = verify_resolution(res, fld)
        d = res.to_dict()
        d.update(rank=r, shape=res.shape(), certificate=cert.to_dict())
        rows.append(d)
    return {"resolutions": rows}, 0


def cmd_ext(job: JobFile, args) -> tuple[dict, int]:
    q = _quiver(job)
    beta = _beta(job, q)
    eps = job.sign_function(q)
    fld = job.coefficient_field()
    rows, dots = [], []
    for k, r in enumerate(_rank_maps(job, q, beta)):
        rep, res, src, tgt = ext_between(q, beta, r, eps, job.lam or None, job.mu or None,
                                         job.theta or None, depth=job.depth, fld=fld)
        d = rep.to_dict()
        d.update(rank=r, source=src.params.to_dict(), target=tgt.params.to_dict())
        rows.append(d)
        if args.dot:
            dots.append(build_ext_graph(res, tgt).to_dot(f"ext{k}"))
        if rep.graph_violations:
            raise CrossCheckError("EXT graph structure violations: " + "; ".join(rep.graph_violations))
    if args.dot:
        _write(args.dot, "".join(dots))
    return {"field": job.field_name, "reports": rows}, 0


def cmd_canon(job: JobFile, args) -> tuple[dict, int]:
    q = _quiver(job)
    beta = _beta(job, q)
    eps = job.sign_function(q)
    entries = canonical_decomposition_report(q, beta, eps, job.coefficient_field())
    out = {"beta": beta, "entries": [e.to_dict() for e in entries]}
    alarms = [a for e in entries for a in e.alarms]
    return out, 3 if alarms else 0


def cmd_selftest(job: JobFile | None, args) -> tuple[dict, int]:
    from .selftest import run_selftest

    out = run_selftest()
    return out, 0 if out["ok"] else 3


HANDLERS = {
    "check": cmd_check,
    "components": cmd_components,
    "graph": cmd_graph,
    "module": cmd_module,
    "resolve": cmd_resolve,
    "ext": cmd_ext,
    "canon": cmd_canon,
    "selftest": cmd_selftest,
}


# -- output ---------------------------------------------------------------------------

def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_inline(v)}")
    else:
        lines.append(f"{pad}{_inline(obj)}")
    return "\n".join(lines)


def _flat(v) -> bool:
    items = v.values() if isinstance(v, dict) else v
    return all(not isinstance(x, (dict, list)) for x in items)


def _inline(v) -> str:
    if isinstance(v, dict):
        return ", ".join(f"{k}={_inline(x)}" for k, x in sorted(v.items()))
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if v is None:
        return "-"
    return str(v)


def emit(report: dict, fmt: str, stream) -> None:
    report = _exact(report)
    if fmt == "json":
        stream.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        stream.write(render_text(report) + "\n")


# -- entry point -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gentle-ext", description="Generic modules and Ext for gentle algebras.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("job", nargs="?", help="job file path, '-' for stdin (not needed for selftest)")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--dot", metavar="PATH", help="write the graph (graph, ext) in dot format")
    for flag, _ in OVERRIDES:
        p.add_argument(f"--{flag}", metavar="ENTRIES", help=f"replace the {flag} section")
    p.add_argument("--field", help="rational or fp:<p>")
    p.add_argument("--depth", help="resolution depth (at least 2)")
    return p


def load_job(args) -> JobFile:
    if args.job is None:
        raise DomainError(f"{args.command} needs a job file")
    if args.job == "-":
        text = sys.stdin.read()
    else:
        with open(args.job, encoding="utf-8") as fh:
            text = fh.read()
    job = parse_job(text)
    for flag, kw in OVERRIDES:
        val = getattr(args, flag)
        if val is not None:
            job = apply_override(job, kw, val)
    if args.field is not None:
        job = apply_override(job, "option", f"field={args.field}")
    if args.depth is not None:
        job = apply_override(job, "option", f"depth={args.depth}")
    return job


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        job = None if args.command == "selftest" and args.job is None else load_job(args)
        report, code = HANDLERS[args.command](job, args)
    except ParseError as exc:
        stderr.write(f"parse error {exc}\n")
        return 2
    except (CrossCheckError, ResolutionError) as exc:
        stderr.write(f"cross-check failed: {exc}\n")
        return 3
    except (DomainError, ModuleError, NotFiniteDimensional, QuiverError, ValueError, OSError) as exc:
        stderr.write(f"error: {exc}\n")
        return 1
    emit(report, args.format, stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
