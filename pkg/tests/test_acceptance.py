"""Acceptance criteria, one test per criterion.

Each test records PASS or FAIL; the summary hook in conftest prints one
line per criterion at the end of the run.  Run only this file with

    python3 -m pytest tests/test_acceptance.py -v
"""
import itertools
import random
import time
from contextlib import contextmanager

import pytest

from gentle_ext.cocycle import ext1_cocycle_oracle, hom_dim
from gentle_ext.ext import build_ext_graph, combinatorial_rank, ext_between, ext_graph_violations
from gentle_ext.fixtures import (NAMED, SIX_VERTEX_BETA, SIX_VERTEX_RANK, random_case, random_gentle_quiver,
                                 random_suite, six_vertex, six_vertex_sign)
from gentle_ext.graph import build_updown_graph, decompose
from gentle_ext.linalg import rank
from gentle_ext.module import (build_module, component_summands, theta_epsilon_invariance, verify_rank_stratum,
                               verify_relations)
from gentle_ext.quiver import canonical_sign, enumerate_sign_functions
from gentle_ext.ranks import brute_force_maximal, enumerate_maximal_rank_maps
from gentle_ext.resolution import build_resolution, verify_resolution
from test_ranks import chain_maxima_oracle, chain_quiver

RESULTS: dict[int, tuple[str, str]] = {}
DEPTH = 10


@contextmanager
def criterion(n, title, budget=None):
    t0 = time.perf_counter()
    try:
        yield
        dt = time.perf_counter() - t0
        if budget is not None:
            assert dt < budget, f"took {dt:.2f} s, budget {budget} s"
    except BaseException as exc:
        RESULTS[n] = ("FAIL", f"{title}: {exc}")
        raise
    RESULTS[n] = ("PASS", f"{title} ({time.perf_counter() - t0:.2f} s)")


def suite(count=200, seed=7, **kw):
    return random_suite(seed, count, max_vertices=6, max_beta=5, **kw)


def three_ways(res, tgt):
    """(linear-algebra dims, graph-combinatorial dims, cocycle Ext^1) computed separately."""
    eg = build_ext_graph(res, tgt)
    hc = eg.complex
    lin = [rank(d) for d in hc.d]
    comb = [combinatorial_rank(layer)[0] for layer in hc.contributions]

    def dims(rk):
        return [hc.dims[i] - (rk[i - 1] if i else 0) - rk[i] for i in range(len(rk))]

    return dims(lin), dims(comb), ext1_cocycle_oracle(res.module, tgt), eg


def test_c01_sign_function_count():
    with criterion(1, "sign functions number 2^|Q0|", budget=1.0):
        rng = random.Random(1)
        for _ in range(20):
            q = random_gentle_quiver(rng, max_vertices=6)
            assert all(q.colors_at(x) for x in q.vertices)
            assert len(enumerate_sign_functions(q)) == 2 ** len(q.vertices)


def test_c02_graph_structure():
    with criterion(2, "Gamma has degree <= 2, distinct colors, strings and bands", budget=5.0):
        for c in suite(200, seed=2):
            g = build_updown_graph(c.q, c.beta, c.r, c.eps)
            for v in g.vertices:
                cols = [g.edge_color(k) for k in g.incident[v]]
                assert len(cols) <= 2 and len(set(cols)) == len(cols)
            for comp in decompose(g):
                nv, ne = len(comp.vertex_set), len(comp.edges)
                assert ne == (nv if comp.kind == "band" else nv - 1)


def test_c03_rank_map_oracle():
    with criterion(3, "maximal rank maps equal brute-force maximal filtering", budget=10.0):
        # rank constraints are per color, so single chains of <= 5 arrows cover every quiver
        for k in range(1, 6):
            q = chain_quiver(k)
            for beta in itertools.product(range(5), repeat=k + 1):
                assert {rm.as_tuple() for rm in enumerate_maximal_rank_maps(q, beta)} == chain_maxima_oracle(beta)
        for name, make in NAMED.items():
            q = make()
            if len(q.arrows) > 5:
                continue
            for beta in itertools.product(range(5), repeat=len(q.vertices)):
                fast = {rm.as_tuple() for rm in enumerate_maximal_rank_maps(q, beta)}
                assert fast == brute_force_maximal(q, beta), (name, beta)
        rng = random.Random(3)
        done = 0
        while done < 100:
            q = random_gentle_quiver(rng, max_vertices=6)
            if len(q.arrows) > 5:
                continue
            beta = {x: rng.randint(0, 4) for x in q.vertices}
            assert {rm.as_tuple() for rm in enumerate_maximal_rank_maps(q, beta)} == brute_force_maximal(q, beta)
            done += 1


def test_c04_relations_and_rank_stratum():
    with criterion(4, "modules satisfy the relations and have rank r", budget=5.0):
        for c in suite(200, seed=4):
            m = build_module(build_updown_graph(c.q, c.beta, c.r, c.eps))
            assert verify_relations(m) is None
            assert verify_rank_stratum(m, c.r) is None


def _fixture_cases():
    for name, make in sorted(NAMED.items()):
        q = make()
        for k in (1, 2):
            beta = {x: k for x in q.vertices}
            for rm in enumerate_maximal_rank_maps(q, beta):
                yield name, q, beta, rm.as_dict(), canonical_sign(q)
    q = NAMED["A3REL"]()
    for x in q.vertices:
        yield "A3REL simple", q, {y: int(x == y) for y in q.vertices}, {"a": 0, "b": 0}, canonical_sign(q)
    q = NAMED["KRON"]()
    for k in (1, 2, 3):
        yield "KRON bands", q, {"1": k, "2": k}, {"a": k, "b": k}, canonical_sign(q)
    q = six_vertex()
    yield "EX26", q, SIX_VERTEX_BETA, SIX_VERTEX_RANK, six_vertex_sign(q)


def test_c05_resolution_certificate():
    with criterion(5, "resolution certificates on every fixture", budget=10.0):
        for name, q, beta, r, eps in _fixture_cases():
            g = build_updown_graph(q, beta, r, eps)
            res = build_resolution(g, build_module(g), DEPTH)
            cert = verify_resolution(res)
            assert cert.composition and cert.cokernel_dims == beta, name
            top = DEPTH - 1 if res.truncated else res.length()
            assert cert.exact_degrees == list(range(1, top + 1)), name


def test_c06_kronecker_self_extension():
    with criterion(6, "Kronecker band with lambda = mu has Ext^1 = 1 by all three methods"):
        q = NAMED["KRON"]()
        for lam in (2, 5, -1):
            _, res, src, tgt = ext_between(q, {"1": 1, "2": 1}, {"a": 1, "b": 1}, canonical_sign(q),
                                           lam={0: lam}, mu={0: lam})
            lin, comb, coc, _ = three_ways(res, tgt)
            assert lin[1] == comb[1] == coc == 1


def test_c07_distinct_parameters():
    with criterion(7, "all-pairs-distinct parameters give Ext^1 = 0 by all three methods"):
        rng = random.Random(77)
        for _ in range(50):
            c = random_case(rng, max_vertices=6, max_beta=4, require_band=True)
            g = build_updown_graph(c.q, c.beta, c.r, c.eps)
            nb = len(g.bands())
            vals = rng.sample(range(2, 1000), 2 * nb)
            lam, mu = dict(enumerate(vals[:nb])), dict(enumerate(vals[nb:]))
            _, res, src, tgt = ext_between(c.q, c.beta, c.r, c.eps, lam=lam, mu=mu)
            lin, comb, coc, _ = three_ways(res, tgt)
            assert lin[1] == comb[1] == coc == 0


def test_c08_method_agreement():
    with criterion(8, "graph, Hom-complex and cocycle Ext dimensions agree", budget=60.0):
        cases = suite(200, seed=8) + suite(50, seed=9, require_band=True)
        assert len(cases) >= 200
        for c in cases:
            _, res, src, tgt = ext_between(c.q, c.beta, c.r, c.eps, depth=DEPTH)
            lin, comb, coc, _ = three_ways(res, tgt)
            assert lin == comb
            assert lin[1] == coc
            assert lin[0] == hom_dim(src, tgt)


def test_c09_ext_graph_structure():
    with criterion(9, "EXT graphs have no isolated level-1 nodes, bounded degrees, no 0-1 strings ending in level 1"):
        cases = [(c.q, c.beta, c.r, c.eps) for c in suite(200, seed=8) + suite(50, seed=9, require_band=True)]
        cases += [(q, b, r, e) for _, q, b, r, e in _fixture_cases()]
        for q, beta, r, eps in cases:
            g = build_updown_graph(q, beta, r, eps)
            nb = len(g.bands())
            for mu in (None, {b: 2 + b for b in range(nb)}, {b: 1000 + b for b in range(nb)}):
                _, res, _, tgt = ext_between(q, beta, r, eps, mu=mu, depth=DEPTH)
                assert ext_graph_violations(build_ext_graph(res, tgt)) == []


def test_c10_six_vertex_shape():
    with criterion(10, "six-vertex example resolution shape and delta_1"):
        q = six_vertex()
        g = build_updown_graph(q, SIX_VERTEX_BETA, SIX_VERTEX_RANK, six_vertex_sign(q))
        res = build_resolution(g, build_module(g), DEPTH)
        assert [s for s in res.shape() if s] == [{"1": 3, "4": 2}, {"2": 1, "3": 1, "5": 2, "6": 1}, {"3": 1}]
        entries = res.differentials[1].nonzero_entries()
        assert len(entries) == 1
        (terms,) = entries.values()
        assert [(c, p.arrows) for c, p in terms] == [(1, ("g2",))]
        verify_resolution(res)


def test_c11_theta_epsilon_invariance():
    with criterion(11, "component words and Hom fingerprints invariant under theta and epsilon"):
        checked = 0
        for name, make in sorted(NAMED.items()):
            q = make()
            if len(enumerate_sign_functions(q)) > 8:
                continue
            for beta in itertools.product((1, 2), repeat=len(q.vertices)):
                beta = dict(zip(q.vertices, beta))
                for rm in enumerate_maximal_rank_maps(q, beta):
                    rep = theta_epsilon_invariance(q, beta, rm.as_dict())
                    assert rep.ok, (name, beta, rm.as_dict(), rep.mismatch)
                    checked += 1
        q = six_vertex()
        rep = theta_epsilon_invariance(q, SIX_VERTEX_BETA, SIX_VERTEX_RANK, signs=[six_vertex_sign(q)])
        assert rep.ok and rep.theta_choices == 4
        assert checked > 50


def test_c12_canonical_decomposition():
    with criterion(12, "summands of generic modules have vanishing mutual ext^1"):
        for name, make in sorted(NAMED.items()):
            q = make()
            for k in (1, 2):
                beta = {x: k for x in q.vertices}
                g_eps = canonical_sign(q)
                for rm in enumerate_maximal_rank_maps(q, beta):
                    g = build_updown_graph(q, beta, rm.as_dict(), g_eps)
                    parts = component_summands(build_module(g))
                    for i, j in itertools.permutations(range(len(parts)), 2):
                        assert ext1_cocycle_oracle(parts[i], parts[j]) == 0, (name, rm.as_dict(), i, j)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v"]))
