"""Hom and Ext^1 between representations from the cocycle description.

Independent of the projective resolution: Ext^1 is computed as
Z / B with Z the arrow-wise maps compatible with the monomial relations and B
the coboundaries of vertex-wise maps.
"""
from __future__ import annotations

from fractions import Fraction

from .linalg import RATIONAL, Field, SparseMatrix, nullity, rank
from .module import Representation


def _left(A: SparseMatrix, n: int) -> dict[tuple[int, int], Fraction]:
    # vec(f) -> vec(A f), f of shape (A.ncols, n), row-major
    out = {}
    for (i, k), v in A.entries.items():
        for j in range(n):
            out[(i * n + j, k * n + j)] = v
    return out


def _right(B: SparseMatrix, p: int) -> dict[tuple[int, int], Fraction]:
    # vec(f) -> vec(f B), f of shape (p, B.nrows)
    n, m = B.nrows, B.ncols
    out = {}
    for (k, j), v in B.entries.items():
        for i in range(p):
            out[(i * m + j, i * n + k)] = v
    return out


def _offsets(sizes: list[int]) -> list[int]:
    off = [0]
    for s in sizes:
        off.append(off[-1] + s)
    return off


def _add(target: dict, block: dict, r0: int, c0: int, sign: int) -> None:
    for (i, j), v in block.items():
        key = (r0 + i, c0 + j)
        s = target.get(key, 0) + sign * v
        if s:
            target[key] = s
        else:
            target.pop(key, None)


def coboundary_matrix(m: Representation, n: Representation) -> SparseMatrix:
    """(g_x)_x -> (g_ha M_a - N_a g_ta)_a."""
    q = m.q
    vsz = [n.beta[x] * m.beta[x] for x in q.vertices]
    asz = [n.beta[a.head] * m.beta[a.tail] for a in q.arrows]
    voff, aoff = _offsets(vsz), _offsets(asz)
    ent: dict = {}
    for k, a in enumerate(q.arrows):
        ti, hi = q.vertex_index(a.tail), q.vertex_index(a.head)
        # g_ha M_a: g_ha has shape (n_ha, m_ha)
        _add(ent, _right(m.matrices[a.id], n.beta[a.head]), aoff[k], voff[hi], 1)
        # N_a g_ta: g_ta has shape (n_ta, m_ta)
        _add(ent, _left(n.matrices[a.id], m.beta[a.tail]), aoff[k], voff[ti], -1)
    out = SparseMatrix(aoff[-1], voff[-1])
    out.entries = ent
    return out


def cocycle_matrix(m: Representation, n: Representation) -> SparseMatrix:
    """(f_a)_a -> (N_b f_a + f_b M_a) for each relation (a, b)."""
    q = m.q
    asz = [n.beta[a.head] * m.beta[a.tail] for a in q.arrows]
    aoff = _offsets(asz)
    rels = q.relations()
    rsz = [n.beta[q.arrow(b).head] * m.beta[q.arrow(a).tail] for a, b in rels]
    roff = _offsets(rsz)
    ent: dict = {}
    for k, (a, b) in enumerate(rels):
        ia, ib = q.arrow_index(a), q.arrow_index(b)
        _add(ent, _left(n.matrices[b], m.beta[q.arrow(a).tail]), roff[k], aoff[ia], 1)
        _add(ent, _right(m.matrices[a], n.beta[q.arrow(b).head]), roff[k], aoff[ib], 1)
    out = SparseMatrix(roff[-1], aoff[-1])
    out.entries = ent
    return out


def hom_dim(m: Representation, n: Representation, fld: Field = RATIONAL) -> int:
    return nullity(coboundary_matrix(m, n), fld)


def ext1_cocycle_oracle(m: Representation, n: Representation, fld: Field = RATIONAL) -> int:
    z = nullity(cocycle_matrix(m, n), fld)
    b = rank(coboundary_matrix(m, n), fld)
    return z - b
