from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from conftest import cases
from gentle_ext.cocycle import hom_dim
from gentle_ext.fixtures import SIX_VERTEX_BETA, SIX_VERTEX_RANK, kronecker, six_vertex, six_vertex_sign
from gentle_ext.graph import build_updown_graph
from gentle_ext.linalg import Field
from gentle_ext.module import (ModuleError, band_targets, build_module, component_summands, default_parameters,
                               nth_prime, theta_epsilon_invariance, verify_rank_stratum, verify_relations)
from gentle_ext.quiver import canonical_sign


def _ex26():
    q = six_vertex()
    return build_updown_graph(q, SIX_VERTEX_BETA, SIX_VERTEX_RANK, six_vertex_sign(q))


def test_nth_prime():
    assert [nth_prime(i) for i in range(6)] == [2, 3, 5, 7, 11, 13]
    assert nth_prime(30) == 127


def test_default_parameters():
    g = build_updown_graph(kronecker(), {"1": 2, "2": 2}, {"a": 2, "b": 2}, canonical_sign(kronecker()))
    p = default_parameters(g)
    assert p.lam == {0: 2, 1: 3}
    assert all(p.theta[b] == band_targets(g, b)[0] for b in (0, 1))
    with pytest.raises(ModuleError):
        default_parameters(g, lam={5: 2})
    with pytest.raises(ModuleError):
        default_parameters(g, lam={0: 0})


def test_theta_must_be_target_on_band():
    g = _ex26()
    bad = default_parameters(g, theta={0: ("1", 1)})
    with pytest.raises(ModuleError):
        build_module(g, bad)


def test_ex26_lambda_on_p2_for_theta_at_six():
    g = _ex26()
    m = build_module(g, default_parameters(g, lam={0: 7}, theta={0: ("6", 1)}))
    assert m.matrices["p2"][(0, 1)] == 7
    assert m.matrices["b2"][(0, 0)] == 1


def test_kronecker_band_module():
    q = kronecker()
    g = build_updown_graph(q, {"1": 1, "2": 1}, {"a": 1, "b": 1}, canonical_sign(q))
    m = build_module(g, default_parameters(g, lam={0: Fraction(5, 3)}))
    vals = sorted(m.matrices[a][(0, 0)] for a in ("a", "b"))
    assert vals == [1, Fraction(5, 3)]
    assert m.to_dict()["matrices"] in ({"a": [["5/3"]], "b": [["1"]]}, {"a": [["1"]], "b": [["5/3"]]})


@given(cases(max_beta=5))
def test_module_invariants(case):
    g = build_updown_graph(case.q, case.beta, case.r, case.eps)
    m = build_module(g)
    assert verify_relations(m) is None
    assert verify_rank_stratum(m, case.r) is None
    assert verify_rank_stratum(m, case.r, Field(1000003)) is None
    lam = default_parameters(g).lam
    special = []
    for a in case.q.arrows:
        mat = m.matrices[a.id]
        dense = np.array(mat.to_dense(), dtype=object).reshape(mat.nrows, mat.ncols)
        nz = dense != 0
        assert (nz.sum(axis=0) <= 1).all() and (nz.sum(axis=1) <= 1).all()
        assert mat.nnz() == case.r[a.id]
        special += [v for v in mat.entries.values() if v != 1]
    assert sorted(special) == sorted(lam.values())


@given(cases(max_beta=4))
def test_block_structure_by_component(case):
    g = build_updown_graph(case.q, case.beta, case.r, case.eps)
    m = build_module(g)
    owner = {}
    for ci, c in enumerate(g.components()):
        for v in c.vertices:
            owner[v] = ci
    for a in case.q.arrows:
        for (i, j) in m.matrices[a.id].entries:
            assert owner[(a.head, i + 1)] == owner[(a.tail, j + 1)]
    parts = component_summands(m)
    assert sum(p.dim() for p in parts) == m.dim()
    assert sum(hom_dim(p, p) for p in parts) <= hom_dim(m, m)


def test_theta_family_invariance_ex26():
    q = six_vertex()
    rep = theta_epsilon_invariance(q, SIX_VERTEX_BETA, SIX_VERTEX_RANK, signs=[six_vertex_sign(q)])
    assert rep.ok and rep.theta_choices == 4


def test_moving_theta_can_invert_lambda():
    g = _ex26()
    targets = band_targets(g, 0)
    a = build_module(g, default_parameters(g, lam={0: 2}, theta={0: targets[0]}))
    b = build_module(g, default_parameters(g, lam={0: 2}, theta={0: targets[1]}))
    b_inv = build_module(g, default_parameters(g, lam={0: Fraction(1, 2)}, theta={0: targets[1]}))
    end = hom_dim(a, a)
    assert hom_dim(a, b) < end
    assert hom_dim(a, b_inv) == end == hom_dim(b_inv, a)


def test_kronecker_invariance_all_signs():
    rep = theta_epsilon_invariance(kronecker(), {"1": 2, "2": 2}, {"a": 2, "b": 2})
    assert rep.ok and rep.sign_functions == 4
