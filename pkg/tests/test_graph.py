import networkx as nx
import pytest
from hypothesis import given

from conftest import cases
from gentle_ext.fixtures import SIX_VERTEX_BETA, SIX_VERTEX_RANK, kronecker, six_vertex, six_vertex_sign, a3_rel, with_isolated
from gentle_ext.graph import (all_direct_paths, arrow_chains, build_updown_graph, check_level_bounds,
                              check_path_lifting, classify_vertices, decompose, invert_word,
                              longest_direct_paths, maximal_direct_path, to_dot, vname, word_multiset)
from gentle_ext.quiver import canonical_sign, enumerate_sign_functions


def edge_oracle(q, beta, r, eps):
    """Edge set written straight from the index rules."""
    out = set()
    for a in q.arrows:
        for i in range(1, r[a.id] + 1):
            t = i if eps(a.tail, a.color) == 1 else beta[a.tail] - i + 1
            h = i if eps(a.head, a.color) == -1 else beta[a.head] - i + 1
            out.add((a.id, (a.tail, t), (a.head, h)))
    return out


@pytest.fixture
def ex26():
    q = six_vertex()
    return build_updown_graph(q, SIX_VERTEX_BETA, SIX_VERTEX_RANK, six_vertex_sign(q))


def test_ex26_sources_and_targets(ex26):
    cls = classify_vertices(ex26)
    assert {vname(v) for v in cls.S} == {"v1^1", "v2^1", "v3^1", "v1^4", "v2^4"}
    assert {vname(v) for v in cls.T} == {"v3^2", "v2^5", "v1^3", "v1^6", "v2^6"}


def test_ex26_direct_path_signs(ex26):
    p = maximal_direct_path(ex26, ("1", 3))
    assert [vname(v) for v in p.vertices] == ["v3^1", "v1^2", "v2^6"]
    assert p.arrows() == ("r1", "p2")
    assert p.left_sign(ex26) == 1 and p.right_sign(ex26) == -1
    walks = {tuple(p.vertices) for p in all_direct_paths(ex26)}
    assert (("4", 1), ("2", 3), ("1", 1)) not in walks
    assert (("1", 1), ("2", 3), ("4", 1)) not in walks


def test_ex26_components(ex26):
    comps = decompose(ex26)
    assert [c.kind for c in comps] == ["band", "string"]
    assert comps[1].word_str() == "r1 p2"
    assert len(comps[0].vertices) == 12
    assert ex26.bands() == [comps[0]]


def test_edges_match_index_rules(ex26):
    got = {(e.arrow, e.tail, e.head) for e in ex26.edges}
    assert got == edge_oracle(ex26.q, ex26.beta, ex26.r, ex26.eps)


def test_kronecker_two_bands():
    q = kronecker()
    for eps in enumerate_sign_functions(q):
        g = build_updown_graph(q, {"1": 2, "2": 2}, {"a": 2, "b": 2}, eps)
        assert [c.kind for c in g.components()] == ["band", "band"]


def test_isolated_vertex_component():
    q = with_isolated()
    g = build_updown_graph(q, {"1": 1, "2": 0, "3": 1}, {"a": 0}, canonical_sign(q))
    comps = g.components()
    assert [c.word_str() for c in comps] == ["e_1", "e_3"]
    cls = classify_vertices(g)
    assert cls.ISO == [("1", 1), ("3", 1)] and not cls.S and not cls.T


def test_invalid_rank_rejected():
    q = a3_rel()
    with pytest.raises(ValueError):
        build_updown_graph(q, {"1": 1, "2": 1, "3": 1}, {"a": 1, "b": 1}, canonical_sign(q))


def test_chain_uses_other_color(ex26):
    (ch,) = arrow_chains(ex26, ("1", 3))
    assert ch.arrows == ("g1", "g2")
    (ch,) = arrow_chains(ex26, ("6", 2))
    assert ch.arrows == ()


def test_invert_word():
    assert invert_word((("a", 1), ("b", -1))) == (("b", 1), ("a", -1))


def test_dot_export(ex26):
    dot = to_dot(ex26)
    assert dot.startswith("graph updown {") and dot.count(" -- ") == len(ex26.edges)


@given(cases(max_beta=5))
def test_structure_properties(case):
    g = build_updown_graph(case.q, case.beta, case.r, case.eps)
    assert {(e.arrow, e.tail, e.head) for e in g.edges} == edge_oracle(case.q, case.beta, case.r, case.eps)
    for v in g.vertices:
        cols = [g.edge_color(k) for k in g.incident[v]]
        assert len(cols) <= 2 and len(set(cols)) == len(cols)
    ref = nx.MultiGraph()
    ref.add_nodes_from(g.vertices)
    ref.add_edges_from((e.tail, e.head) for e in g.edges)
    comps = decompose(g)
    assert sorted(sorted(c.vertex_set) for c in comps) == sorted(sorted(c) for c in nx.connected_components(ref))
    for c in comps:
        sub = ref.subgraph(c.vertex_set)
        is_cycle = sub.number_of_edges() == sub.number_of_nodes()
        assert (c.kind == "band") == is_cycle
        assert sum(c.rank.values()) == len(c.edges)
    assert sum(c.rank[a.id] for c in comps for a in [case.q.arrows[0]]) == case.r[case.q.arrows[0].id]


@given(cases(max_beta=5))
def test_lifting_and_level_bounds_hold(case):
    g = build_updown_graph(case.q, case.beta, case.r, case.eps)
    assert check_path_lifting(g) is None
    assert check_level_bounds(g) is None


@given(cases(max_vertices=5, max_beta=3))
def test_word_multiset_independent_of_sign(case):
    ref = word_multiset(build_updown_graph(case.q, case.beta, case.r, case.eps))
    for eps in enumerate_sign_functions(case.q)[:8]:
        assert word_multiset(build_updown_graph(case.q, case.beta, case.r, eps)) == ref


@given(cases(max_beta=4))
def test_longest_direct_paths_per_sign(case):
    g = build_updown_graph(case.q, case.beta, case.r, case.eps)
    cls = classify_vertices(g)
    for v in cls.T2 + cls.S2:
        lp = longest_direct_paths(g, v)
        assert set(lp) == {1, -1}
        for p in lp.values():
            assert p.direct
