"""Oracle cross-validation over the built-in fixtures."""
from __future__ import annotations

from .ext import CrossCheckError, ext_between
from .fixtures import NAMED, SIX_VERTEX_BETA, SIX_VERTEX_RANK, six_vertex_sign
from .graph import build_updown_graph, check_level_bounds, check_path_lifting
from .module import build_module, verify_rank_stratum, verify_relations
from .quiver import canonical_sign, check_gentle
from .ranks import brute_force_maximal, check_triple_saturation, enumerate_maximal_rank_maps
from .resolution import ResolutionError, build_resolution, verify_resolution


def _check_case(q, beta, r, eps) -> list[str]:
    fails = []
    sat = check_triple_saturation(q, beta, r)
    if sat is not None:
        fails.append(f"triple saturation fails at {sat}")
    g = build_updown_graph(q, beta, r, eps)
    if (w := check_path_lifting(g)) is not None:
        fails.append(f"path lifting: {w}")
    if (w := check_level_bounds(g)) is not None:
        fails.append(f"level bounds: {w}")
    m = build_module(g)
    if (w := verify_relations(m)) is not None:
        fails.append(f"relation {w} acts nonzero")
    if (w := verify_rank_stratum(m, r)) is not None:
        fails.append(f"rank stratum: {w}")
    try:
        verify_resolution(build_resolution(g, m, 6))
        rep = ext_between(q, beta, r, eps, depth=6)[0]
        fails.extend(rep.graph_violations)
    except (CrossCheckError, ResolutionError) as exc:
        fails.append(str(exc))
    return fails


def run_selftest() -> dict:
    report: dict = {}
    for name, make in sorted(NAMED.items()):
        q = make()
        gentle = check_gentle(q)
        entry = {"gentle": gentle.ok, "cases": 0, "failures": []}
        report[name] = entry
        if not gentle.ok:
            entry["failures"].append("fixture is not gentle")
            continue
        betas = [{x: k for x in q.vertices} for k in (1, 2)]
        if name == "EX26":
            betas = [dict(SIX_VERTEX_BETA)]
        eps = canonical_sign(q)
        for beta in betas:
            fast = {rm.as_tuple() for rm in enumerate_maximal_rank_maps(q, beta)}
            if fast != brute_force_maximal(q, beta):
                entry["failures"].append(f"rank-map enumeration disagrees at beta {beta}")
            for rm in enumerate_maximal_rank_maps(q, beta):
                entry["cases"] += 1
                entry["failures"].extend(_check_case(q, beta, rm.as_dict(), eps))
        if name == "EX26":
            entry["cases"] += 1
            entry["failures"].extend(_check_case(q, SIX_VERTEX_BETA, SIX_VERTEX_RANK, six_vertex_sign(q)))
        if name == "KRON":
            beta, r = {"1": 1, "2": 1}, {"a": 1, "b": 1}
            same = ext_between(q, beta, r, eps, lam={0: 2}, mu={0: 2})[0]
            other = ext_between(q, beta, r, eps, lam={0: 2}, mu={0: 3})[0]
            if same.dims[1] != 1 or other.dims[1] != 0:
                entry["failures"].append(f"band self-extension counts {same.dims[1]}, {other.dims[1]}")
    ok = all(not e["failures"] for e in report.values())
    return {"ok": ok, "fixtures": report}
