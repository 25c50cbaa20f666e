"""EXT graph and Ext dimensions computed three independent ways."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cocycle import ext1_cocycle_oracle, hom_dim
from .graph import build_updown_graph, vname
from .linalg import RATIONAL, Field, SparseMatrix, rank
from .module import Representation, build_module, component_summands, default_parameters
from .quiver import ColoredQuiver, SignFunction, canonical_sign
from .ranks import enumerate_maximal_rank_maps
from .resolution import HomComplex, Resolution, build_resolution, hom_complex


class CrossCheckError(AssertionError):
    """Two independent Ext computations disagree."""


# -- EXT graph ----------------------------------------------------------------------

Node = tuple[int, int]  # (level, position in C^level)


@dataclass
class ExtGraph:
    """Leveled multigraph: one edge per path term of Hom(delta_l, N)."""

    complex: HomComplex
    labels: list[list[str]]
    kinds: list[list[str]]
    edges: list[tuple[Node, Node, Fraction]]
    adjacency: dict[Node, list[int]] = field(default_factory=dict)

    def degree(self, n: Node) -> int:
        return len(self.adjacency.get(n, ()))

    def neighbours(self, n: Node) -> list[Node]:
        out = []
        for k in self.adjacency.get(n, ()):
            a, b, _ = self.edges[k]
            out.append(b if a == n else a)
        return out

    def nodes(self) -> list[Node]:
        return [(l, i) for l, lab in enumerate(self.labels) for i in range(len(lab))]

    def components(self) -> list[list[Node]]:
        seen: set[Node] = set()
        out = []
        for n in self.nodes():
            if n in seen:
                continue
            stack, comp = [n], [n]
            seen.add(n)
            while stack:
                u = stack.pop()
                for w in self.neighbours(u):
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        stack.append(w)
            out.append(sorted(comp))
        return out

    def is_cycle(self, comp: list[Node]) -> bool:
        return len(comp) >= 2 and all(self.degree(n) == 2 for n in comp)

    def to_dot(self, name: str = "ext") -> str:
        boxed = {n for c in self.components() if self.is_cycle(c) for n in c}
        lines = [f"graph {name} {{", "  rankdir=LR;", "  node [fontsize=10];"]
        for l, labs in enumerate(self.labels):
            lines.append(f'  subgraph "cluster_EXT{l}" {{')
            lines.append(f'    label="EXT({l})";')
            for i, lab in enumerate(labs):
                shape = "box" if (l, i) in boxed else "ellipse"
                lines.append(f'    "{l}:{i}" [label="{lab}", shape={shape}];')
            lines.append("  }")
        for a, b, c in self.edges:
            lines.append(f'  "{a[0]}:{a[1]}" -- "{b[0]}:{b[1]}" [label="{c}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_ext_graph(res: Resolution, target: Representation) -> ExtGraph:
    """One node per basis vector of Hom(P_l, N), one edge per path term."""
    hc = hom_complex(res, target)
    labels, kinds = [], []
    for t in hc.terms:
        lab, kd = [], []
        for s in t:
            for j in range(1, target.beta[s.vertex] + 1):
                lab.append(f"{vname(s.origin)}#{vname((s.vertex, j))}")
                kd.append(s.kind)
        labels.append(lab)
        kinds.append(kd)
    edges = []
    adj: dict[Node, list[int]] = {}
    for l, layer in enumerate(hc.contributions):
        for i, j, v in layer:
            a, b = (l, j), (l + 1, i)
            adj.setdefault(a, []).append(len(edges))
            adj.setdefault(b, []).append(len(edges))
            edges.append((a, b, v))
    return ExtGraph(hc, labels, kinds, edges, adj)


# -- graph-combinatorial rank ------------------------------------------------------------

@dataclass
class LayerStats:
    peeled: int = 0
    cycles: int = 0
    singular_cycles: int = 0
    fallback: int = 0


def combinatorial_rank(contribs: list[tuple[int, int, Fraction]],
                       fld: Field = RATIONAL) -> tuple[int, LayerStats]:
    """Rank of the matrix whose entries are the sums of the listed contributions.

    Works on the support multigraph (one edge per contribution).  A row or
    column carrying a single edge is a pivot: it adds one to the rank and is
    removed with its partner.  After peeling, a component in which every node
    has two edges is an even cycle; its rank is k or k-1 according to the
    sign-twisted sum of the products over its two perfect matchings.  Any
    other remainder goes to exact elimination and is counted.
    """
    edges = [(("r", i), ("c", j), v) for i, j, v in contribs if not fld.is_zero(v)]
    adj: dict[tuple, set[int]] = {}
    for k, (a, b, _) in enumerate(edges):
        adj.setdefault(a, set()).add(k)
        adj.setdefault(b, set()).add(k)
    st = LayerStats()
    r = 0

    def other(k, n):
        a, b, _ = edges[k]
        return b if a == n else a

    def remove_node(n):
        touched = []
        for k in list(adj.get(n, ())):
            o = other(k, n)
            adj[o].discard(k)
            touched.append(o)
        adj.pop(n, None)
        return touched

    stack = [n for n, ks in adj.items() if len(ks) == 1]
    while stack:
        n = stack.pop()
        if n not in adj or len(adj[n]) != 1:
            continue
        (k,) = adj[n]
        partner = other(k, n)
        remove_node(n)
        for o in remove_node(partner):
            if o in adj and len(adj[o]) == 1:
                stack.append(o)
        r += 1
        st.peeled += 1

    seen: set = set()
    for start in sorted(n for n, ks in adj.items() if ks):
        if start in seen:
            continue
        comp, stack2 = {start}, [start]
        while stack2:
            u = stack2.pop()
            for k in adj[u]:
                o = other(k, u)
                if o not in comp:
                    comp.add(o)
                    stack2.append(o)
        seen |= comp
        rows = sorted(n for n in comp if n[0] == "r")
        cols = sorted(n for n in comp if n[0] == "c")
        if len(rows) == len(cols) and all(len(adj[n]) == 2 for n in comp):
            st.cycles += 1
            kk = len(rows)
            prods = [Fraction(1), Fraction(1)]
            node, prev = rows[0], None
            for step in range(2 * kk):
                ek = next(e for e in sorted(adj[node]) if e != prev)
                prods[step % 2] *= edges[ek][2]
                prev, node = ek, other(ek, node)
            det = prods[0] + (-1) ** (kk - 1) * prods[1]
            if fld.is_zero(det):
                r += kk - 1
                st.singular_cycles += 1
            else:
                r += kk
        else:
            st.fallback += 1
            rp = {n: x for x, n in enumerate(rows)}
            cp = {n: x for x, n in enumerate(cols)}
            ent: dict = {}
            for n in rows:
                for k in adj[n]:
                    key = (rp[n], cp[other(k, n)])
                    ent[key] = ent.get(key, 0) + edges[k][2]
            sub = SparseMatrix(len(rows), len(cols))
            sub.entries = {key: v for key, v in ent.items() if v != 0}
            r += rank(sub, fld)
    return r, st


# -- Ext dimensions -------------------------------------------------------------------------

@dataclass
class ExtReport:
    dims: list[int]
    hom: int
    ext1_cocycle: int
    methods: list[str]
    truncated: bool
    layer_stats: list[LayerStats]
    graph_violations: list[str] = field(default_factory=list)

    @property
    def fallback_layers(self) -> int:
        return sum(1 for s in self.layer_stats if s.fallback)

    @property
    def singular_band_blocks(self) -> int:
        return self.layer_stats[0].singular_cycles if self.layer_stats else 0

    def to_dict(self) -> dict:
        return {
            "ext": {str(i): d for i, d in enumerate(self.dims)},
            "hom_cocycle": self.hom,
            "ext1_cocycle": self.ext1_cocycle,
            "methods": self.methods,
            "truncated": self.truncated,
            "singular_band_blocks": self.singular_band_blocks,
            "elimination_fallbacks": sum(s.fallback for s in self.layer_stats),
            "graph_violations": self.graph_violations,
        }


def _dims_from_ranks(dims: list[int], ranks: list[int], upto: int) -> list[int]:
    out = []
    for i in range(upto):
        rin = ranks[i - 1] if i > 0 else 0
        out.append(dims[i] - rin - ranks[i])
    return out


def ext_dims(res: Resolution, target: Representation, fld: Field = RATIONAL,
             check_graph: bool | None = None) -> ExtReport:
    """dim Ext^i(source, target) for i < depth; raises CrossCheckError on disagreement."""
    eg = build_ext_graph(res, target)
    hc = eg.complex
    lin = [rank(d, fld) for d in hc.d]
    comb, stats = [], []
    for layer in hc.contributions:
        rk, st = combinatorial_rank(layer, fld)
        comb.append(rk)
        stats.append(st)
    n = len(hc.d)
    dims_a = _dims_from_ranks(hc.dims, lin, n)
    dims_b = _dims_from_ranks(hc.dims, comb, n)
    if dims_a != dims_b:
        raise CrossCheckError(f"Hom-complex ranks {dims_a} differ from EXT-graph counts {dims_b}")
    source = res.module
    e1 = ext1_cocycle_oracle(source, target, fld)
    h = hom_dim(source, target, fld)
    if n >= 2 and dims_a[1] != e1:
        raise CrossCheckError(f"Ext^1 from the resolution is {dims_a[1]}, cocycle oracle gives {e1}")
    if dims_a[0] != h:
        raise CrossCheckError(f"Hom from the resolution is {dims_a[0]}, direct count gives {h}")
    if check_graph is None:
        check_graph = target.graph is not None and _same_graph(res.graph, target.graph)
    viol = ext_graph_violations(eg) if check_graph else []
    return ExtReport(dims_a, h, e1, ["linear-algebra", "graph", "cocycle"], res.truncated, stats, viol)


def _same_graph(g1, g2) -> bool:
    return (g1.q == g2.q and g1.beta == g2.beta and g1.r == g2.r and g1.eps == g2.eps)


def ext_graph_violations(eg: ExtGraph) -> list[str]:
    """Isolated level-1 nodes, degree bounds and 0-1 strings ending twice in level 1."""
    out = []
    if len(eg.labels) > 1:
        for i, lab in enumerate(eg.labels[1]):
            if eg.degree((1, i)) == 0:
                out.append(f"isolated EXT(1) node {lab}")
    for l, labs in enumerate(eg.labels):
        for i, lab in enumerate(labs):
            d = eg.degree((l, i))
            if d > 2:
                out.append(f"node {lab} in EXT({l}) has degree {d}")
            elif l >= 1 and eg.kinds[l][i] in ("chain", "iso+", "iso-") and d > 1:
                out.append(f"chain node {lab} in EXT({l}) has degree {d}")
    for comp in eg.components():
        if len(comp) < 2 or eg.is_cycle(comp):
            continue
        ends = [n for n in comp if eg.degree(n) <= 1]
        levels = {n[0] for n in comp}
        if levels <= {0, 1} and len(ends) == 2 and all(n[0] == 1 for n in ends):
            out.append("string with both ends in EXT(1): " + ", ".join(eg.labels[n[0]][n[1]] for n in ends))
    return out


def ext_between(q: ColoredQuiver, beta, r, eps: SignFunction, lam=None, mu=None, theta=None,
                target_beta=None, target_r=None, depth: int | None = None,
                fld: Field = RATIONAL) -> tuple[ExtReport, Resolution, Representation, Representation]:
    """Ext^*(M_lam, M_mu); the target may live on different rank data."""
    g = build_updown_graph(q, beta, r, eps)
    src = build_module(g, default_parameters(g, lam, theta))
    if target_beta is None and target_r is None:
        gt = g
        tgt = build_module(g, default_parameters(g, mu if mu is not None else lam, theta))
    else:
        gt = build_updown_graph(q, target_beta if target_beta is not None else beta,
                                target_r if target_r is not None else r, eps)
        tgt = build_module(gt, default_parameters(gt, mu))
    res = build_resolution(g, src, depth)
    return ext_dims(res, tgt, fld), res, src, tgt


# -- canonical decomposition ------------------------------------------------------------------

@dataclass
class DecompositionEntry:
    rank: dict[str, int]
    components: list[dict]
    pairwise_ext1: list[list[int]]
    alarms: list[str]
    no_bands: bool
    self_ext1: int

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "components": self.components,
            "pairwise_ext1": self.pairwise_ext1,
            "alarms": self.alarms,
            "string_only": self.no_bands,
            "self_ext1": self.self_ext1,
        }


def canonical_decomposition_report(q: ColoredQuiver, beta, eps: SignFunction | None = None,
                                   fld: Field = RATIONAL) -> list[DecompositionEntry]:
    """Per maximal rank map: summands of the generic module and their mutual ext^1."""
    eps = eps or canonical_sign(q)
    out = []
    for rm in enumerate_maximal_rank_maps(q, beta):
        r = rm.as_dict()
        g = build_updown_graph(q, beta, r, eps)
        m = build_module(g)
        parts = component_summands(m)
        comps = g.components()
        k = len(parts)
        mat = [[ext1_cocycle_oracle(parts[i], parts[j], fld) for j in range(k)] for i in range(k)]
        alarms = [f"ext^1(C{i}, C{j}) = {mat[i][j]}"
                  for i in range(k) for j in range(k) if i != j and mat[i][j] != 0]
        no_bands = not g.bands()
        self_e = ext1_cocycle_oracle(m, m, fld)
        if no_bands and self_e != 0:
            alarms.append(f"string-only module has ext^1(M, M) = {self_e}")
        out.append(DecompositionEntry(r, [c.to_dict() for c in comps], mat, alarms, no_bands, self_e))
    return out
