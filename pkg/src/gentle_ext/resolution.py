"""Projective resolution of M_lambda as path matrices, with an exactness certificate."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import (UpDownGraph, Vertex, arrow_chains, classify_vertices, longest_direct_paths,
                    maximal_direct_path, vname)
from .linalg import RATIONAL, Field, SparseMatrix, rank
from .module import Representation
from .quiver import Path, PathBasis, projective_basis

DEFAULT_DEPTH = 10
DEPTH_ENV = "GENTLE_EXT_DEPTH"


def default_depth() -> int:
    raw = os.environ.get(DEPTH_ENV, "").strip()
    return int(raw) if raw else DEFAULT_DEPTH


@dataclass(frozen=True)
class Summand:
    """One copy of P_vertex, attributed to a vertex ``origin`` of Gamma.

    ``kind`` is "top", "two-target", "chain", "iso+" or "iso-"; ``step`` is
    the chain position (1 for [v]_1) and 0 otherwise.
    """

    vertex: str
    origin: Vertex
    kind: str
    step: int = 0

    def label(self) -> str:
        tag = {"top": "", "two-target": "", "chain": f"[{self.step}]",
               "iso+": f"[{self.step}+]", "iso-": f"[{self.step}-]"}[self.kind]
        return f"P{self.vertex}<{vname(self.origin)}{tag}>"


Entry = list[tuple[Fraction, Path]]


@dataclass
class PathMatrix:
    """Map from the direct sum ``cols`` to the direct sum ``rows``.

    Entry (i, j) is a combination of paths from rows[i].vertex to
    cols[j].vertex; the generator of cols[j] goes to that combination.
    """

    rows: list[Summand]
    cols: list[Summand]
    entries: dict[tuple[int, int], Entry] = field(default_factory=dict)

    def add(self, i: int, j: int, coef, path: Path) -> None:
        if path.start != self.rows[i].vertex or path.end != self.cols[j].vertex:
            raise ValueError("path endpoints do not match the summands")
        self.entries.setdefault((i, j), []).append((Fraction(coef), path))

    def nonzero_entries(self) -> dict[tuple[int, int], Entry]:
        out = {}
        for key, terms in self.entries.items():
            acc: dict[Path, Fraction] = {}
            for c, p in terms:
                acc[p] = acc.get(p, 0) + c
            kept = [(c, p) for p, c in acc.items() if c != 0]
            if kept:
                out[key] = kept
        return out

    def to_dict(self) -> dict:
        return {
            "rows": [s.label() for s in self.rows],
            "cols": [s.label() for s in self.cols],
            "entries": [
                {"row": i, "col": j, "terms": [[str(c), str(p)] for c, p in terms]}
                for (i, j), terms in sorted(self.nonzero_entries().items())
            ],
        }


@dataclass
class Resolution:
    graph: UpDownGraph
    module: Representation
    terms: list[list[Summand]]
    differentials: list[PathMatrix]  # differentials[l]: terms[l+1] -> terms[l]
    depth: int
    truncated: bool

    def length(self) -> int:
        """Index of the last nonzero term."""
        n = 0
        for l, t in enumerate(self.terms):
            if t:
                n = l
        return n

    def shape(self) -> list[dict[str, int]]:
        out = []
        for t in self.terms:
            cnt: dict[str, int] = {}
            for s in t:
                cnt[s.vertex] = cnt.get(s.vertex, 0) + 1
            out.append(cnt)
        return out

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "truncated": self.truncated,
            "terms": [[s.label() for s in t] for t in self.terms],
            "differentials": [d.to_dict() for d in self.differentials],
        }


def _gpath_to_path(g: UpDownGraph, p) -> Path:
    return Path(p.start[0], p.end[0], p.arrows())


def build_resolution(g: UpDownGraph, m: Representation, depth: int | None = None) -> Resolution:
    """Resolution terms P_0 .. P_depth with their differentials."""
    depth = default_depth() if depth is None else depth
    if depth < 2:
        raise ValueError("truncation depth must be at least 2")
    q = g.q
    cls = classify_vertices(g)
    params = m.params
    theta_twist: dict[Vertex, Fraction] = {}
    if params is not None:
        for b, v in params.theta.items():
            theta_twist[v] = params.lam[b]

    tops = sorted(cls.S + cls.ISO, key=g.vertex_key)
    terms: list[list[Summand]] = [[Summand(v[0], v, "top") for v in tops]]
    top_index = {s.origin: k for k, s in enumerate(terms[0])}

    # chains for 1-sources, 1-targets and isolated vertices
    chains = []
    for v in sorted(cls.S1 + cls.T1, key=g.vertex_key):
        for ch in arrow_chains(g, v):
            if not ch.arrows:
                continue
            if v in cls.T1:
                p = maximal_direct_path(g, v)
                row, lead = top_index[p.start], p.arrows()
            else:
                row, lead = top_index[v], ()
            chains.append((v, "chain", row, lead, ch.arrows))
    for v in sorted(cls.ISO, key=g.vertex_key):
        for ch in arrow_chains(g, v):
            if ch.arrows:
                chains.append((v, "iso+" if ch.sign == 1 else "iso-", top_index[v], (), ch.arrows))

    t1: list[Summand] = []
    d0_entries = []
    for u in sorted(cls.T2, key=g.vertex_key):
        col = len(t1)
        t1.append(Summand(u[0], u, "two-target"))
        lps = longest_direct_paths(g, u)
        twist = theta_twist.get(u, Fraction(1))
        for sgn, coef in ((1, Fraction(1)), (-1, -twist)):
            p = lps[sgn]
            d0_entries.append((top_index[p.start], col, coef, _gpath_to_path(g, p)))
    chain_pos: dict[int, int] = {}
    for ci, (v, kind, row, lead, arrows) in enumerate(chains):
        col = len(t1)
        first = q.arrow(arrows[0])
        t1.append(Summand(first.head, v, kind, 1))
        start = q.arrow(lead[0]).tail if lead else v[0]
        d0_entries.append((row, col, Fraction(1), Path(start, first.head, tuple(lead) + (first.id,))))
        chain_pos[ci] = col
    terms.append(t1)
    d0 = PathMatrix(terms[0], t1)
    for i, j, c, p in d0_entries:
        d0.add(i, j, c, p)
    diffs = [d0]

    truncated = False
    for l in range(2, depth + 1):
        tl: list[Summand] = []
        ents = []
        nxt_pos = {}
        for ci, (v, kind, row, lead, arrows) in enumerate(chains):
            if ci not in chain_pos or len(arrows) < l:
                continue
            arr = q.arrow(arrows[l - 1])
            col = len(tl)
            tl.append(Summand(arr.head, v, kind, l))
            ents.append((chain_pos[ci], col, Path(arr.tail, arr.head, (arr.id,))))
            nxt_pos[ci] = col
        chain_pos = nxt_pos
        terms.append(tl)
        dl = PathMatrix(terms[l - 1], tl)
        for i, j, p in ents:
            dl.add(i, j, 1, p)
        diffs.append(dl)
    if any(len(c[4]) > depth for c in chains):
        truncated = True
    return Resolution(g, m, terms, diffs, depth, truncated)


# -- verification ------------------------------------------------------------------

class ResolutionError(AssertionError):
    def __init__(self, check: str, degree: int, detail: str = ""):
        super().__init__(f"{check} failed at degree {degree}" + (f": {detail}" if detail else ""))
        self.check = check
        self.degree = degree


def compose(q, outer: PathMatrix, inner: PathMatrix) -> dict[tuple[int, int], Entry]:
    """outer . inner as path matrices, reduced modulo the relations."""
    by_row: dict[int, list] = {}
    for (j, k), terms in inner.entries.items():
        by_row.setdefault(j, []).append((k, terms))
    acc: dict[tuple[int, int], dict[Path, Fraction]] = {}
    for (i, j), terms in outer.entries.items():
        for k, terms2 in by_row.get(j, ()):
            for c1, p1 in terms:
                for c2, p2 in terms2:
                    pp = q.concat(p1, p2)
                    if pp is None:
                        continue
                    d = acc.setdefault((i, k), {})
                    d[pp] = d.get(pp, 0) + c1 * c2
    out = {}
    for key, d in acc.items():
        kept = [(c, p) for p, c in d.items() if c != 0]
        if kept:
            out[key] = kept
    return out


def _offsets(sizes):
    off = [0]
    for s in sizes:
        off.append(off[-1] + s)
    return off


def projective_realization(q, basis: PathBasis, d: PathMatrix) -> SparseMatrix:
    """Scalar matrix of a path matrix acting on the actual projectives."""
    roff = _offsets([basis.dim(s.vertex) for s in d.rows])
    coff = _offsets([basis.dim(s.vertex) for s in d.cols])
    ent: dict[tuple[int, int], Fraction] = {}
    for (i, j), terms in d.entries.items():
        ridx = basis.index(d.rows[i].vertex)
        for w_pos, w in enumerate(basis[d.cols[j].vertex]):
            for c, p in terms:
                pw = q.concat(p, w)
                if pw is None:
                    continue
                key = (roff[i] + ridx[pw], coff[j] + w_pos)
                s = ent.get(key, 0) + c
                if s:
                    ent[key] = s
                else:
                    ent.pop(key, None)
    out = SparseMatrix(roff[-1], coff[-1])
    out.entries = ent
    return out


def augmentation(q, basis: PathBasis, res: Resolution) -> SparseMatrix:
    """P_0 -> M: the path q in the summand of origin v goes to M(q) e_v."""
    m = res.module
    voff = _offsets([m.beta[x] for x in q.vertices])
    pos = {x: voff[k] for k, x in enumerate(q.vertices)}
    coff = _offsets([basis.dim(s.vertex) for s in res.terms[0]])
    ent = {}
    for j, s in enumerate(res.terms[0]):
        for w_pos, w in enumerate(basis[s.vertex]):
            act = m.path_action(w.arrows, s.vertex)
            for (i, k), v in act.entries.items():
                if k == s.origin[1] - 1:
                    ent[(pos[w.end] + i, coff[j] + w_pos)] = v
    return SparseMatrix(voff[-1], coff[-1], ent)


def _end_vertex_rows(basis: PathBasis, summands: list[Summand], y: str) -> list[int]:
    out = []
    off = 0
    for s in summands:
        for k, p in enumerate(basis[s.vertex]):
            if p.end == y:
                out.append(off + k)
        off += basis.dim(s.vertex)
    return out


@dataclass
class Certificate:
    composition: bool
    exact_degrees: list[int]
    cokernel_dims: dict[str, int]
    augmentation_surjective: bool
    truncated: bool

    def to_dict(self) -> dict:
        return {
            "composition_zero": self.composition,
            "exact_degrees": self.exact_degrees,
            "cokernel_dims": self.cokernel_dims,
            "augmentation_surjective": self.augmentation_surjective,
            "truncated": self.truncated,
        }


def verify_resolution(res: Resolution, fld: Field = RATIONAL) -> Certificate:
    """Raise ResolutionError on the first failed check, else return a certificate."""
    q = res.graph.q
    for l in range(len(res.differentials) - 1):
        bad = compose(q, res.differentials[l], res.differentials[l + 1])
        if bad:
            raise ResolutionError("composition", l + 1, f"nonzero entries at {sorted(bad)}")
    basis = projective_basis(q)
    scal = [projective_realization(q, basis, d) for d in res.differentials]
    dims = [sum(basis.dim(s.vertex) for s in t) for t in res.terms]
    ranks = [rank(m, fld) for m in scal]
    top = len(res.terms) - 2 if res.truncated else res.length()
    exact = []
    for l in range(1, top + 1):
        r_in = ranks[l - 1]
        r_out = ranks[l] if l < len(ranks) else 0
        if dims[l] - r_in != r_out:
            raise ResolutionError("exactness", l, f"kernel {dims[l] - r_in} != image {r_out}")
        exact.append(l)
    aug = augmentation(q, basis, res)
    dim_m = res.module.dim()
    if rank(aug, fld) != dim_m:
        raise ResolutionError("augmentation", 0, "not surjective")
    if not (aug @ scal[0]).is_zero():
        raise ResolutionError("augmentation", 0, "does not vanish on the image of delta_0")
    if dims[0] - ranks[0] != dim_m:
        raise ResolutionError("augmentation", 0, "kernel differs from the image of delta_0")
    coker = {}
    for y in q.vertices:
        rows = _end_vertex_rows(basis, res.terms[0], y)
        cols = _end_vertex_rows(basis, res.terms[1], y)
        coker[y] = len(rows) - rank(scal[0].submatrix(rows, cols), fld)
        if coker[y] != res.module.beta[y]:
            raise ResolutionError("cokernel", 0, f"dimension at {y} is {coker[y]}")
    return Certificate(True, exact, coker, True, res.truncated)


# -- Hom into a target module -------------------------------------------------------

@dataclass
class HomComplex:
    """C^l = Hom(P_l, N) with basis (summand, e_j); d[l]: C^l -> C^{l+1}.

    ``contributions[l]`` lists (row, col, value) once per path term, so
    entries built from several paths appear several times.
    """

    terms: list[list[Summand]]
    dims: list[int]
    offsets: list[list[int]]
    d: list[SparseMatrix]
    contributions: list[list[tuple[int, int, Fraction]]]


def hom_complex(res: Resolution, n: Representation) -> HomComplex:
    """Apply Hom(-, N): a path p in entry (i, j) contributes N(p) to block (j, i)."""
    offs = [_offsets([n.beta[s.vertex] for s in t]) for t in res.terms]
    dims = [o[-1] for o in offs]
    ds, contribs = [], []
    for l, dm in enumerate(res.differentials):
        ent: dict = {}
        layer = []
        for (i, j), terms in sorted(dm.entries.items()):
            for c, p in terms:
                act = n.path_action(p.arrows, p.start)
                for (a, b), v in sorted(act.entries.items()):
                    key = (offs[l + 1][j] + a, offs[l][i] + b)
                    layer.append((key[0], key[1], c * v))
                    s = ent.get(key, 0) + c * v
                    if s:
                        ent[key] = s
                    else:
                        ent.pop(key, None)
        mat = SparseMatrix(dims[l + 1], dims[l])
        mat.entries = ent
        ds.append(mat)
        contribs.append(layer)
    return HomComplex(res.terms, dims, offs, ds, contribs)
