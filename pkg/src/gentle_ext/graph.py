"""The up-and-down graph of (beta, r, eps), its components and path machinery."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .quiver import ColoredQuiver, SignFunction
from .ranks import as_beta, as_rank, validate_rank_map

Vertex = tuple[str, int]  # (level, 1-based index)
Letter = tuple[str, int]  # (arrow id, +1 direct / -1 inverse)


def vname(v: Vertex) -> str:
    return f"v{v[1]}^{v[0]}"


@dataclass(frozen=True)
class GEdge:
    arrow: str
    tail: Vertex
    head: Vertex
    index: int  # i = 1..r(a) in the placement rule


class UpDownGraph:
    def __init__(self, q: ColoredQuiver, beta: dict[str, int], r: dict[str, int],
                 eps: SignFunction, edges: list[GEdge]):
        self.q = q
        self.beta = beta
        self.r = r
        self.eps = eps
        self.edges = edges
        self.vertices: list[Vertex] = [(x, i) for x in q.vertices for i in range(1, beta[x] + 1)]
        self.incident: dict[Vertex, list[int]] = {v: [] for v in self.vertices}
        for k, e in enumerate(edges):
            self.incident[e.tail].append(k)
            self.incident[e.head].append(k)
        self._components = None

    def vertex_key(self, v: Vertex) -> tuple[int, int]:
        return (self.q.vertex_index(v[0]), v[1])

    def degree(self, v: Vertex) -> int:
        return len(self.incident[v])

    def sign(self, x: str, color: str) -> int:
        return self.eps(x, color)

    def edge_color(self, k: int) -> str:
        return self.q.color(self.edges[k].arrow)

    def edge_at(self, v: Vertex, arrow: str, as_head: bool) -> int | None:
        for k in self.incident[v]:
            e = self.edges[k]
            if e.arrow == arrow and (e.head == v if as_head else e.tail == v):
                return k
        return None

    def other_end(self, k: int, v: Vertex) -> Vertex:
        e = self.edges[k]
        return e.head if e.tail == v else e.tail

    def components(self) -> list["Component"]:
        if self._components is None:
            self._components = decompose(self)
        return self._components

    def bands(self) -> list["Component"]:
        return [c for c in self.components() if c.kind == "band"]

    def component_of(self, v: Vertex) -> "Component":
        for c in self.components():
            if v in c.vertex_set:
                return c
        raise KeyError(v)


def build_updown_graph(q: ColoredQuiver, beta, r, eps: SignFunction) -> UpDownGraph:
    """Place r(a) edges per arrow by the four sign-dependent index rules."""
    beta = as_beta(q, beta)
    r = as_rank(q, r)
    bad = validate_rank_map(q, beta, r)
    if bad is not None:
        raise ValueError(f"invalid rank map: {bad.message}")
    edges = []
    for a in q.arrows:
        s = a.color
        et, eh = eps(a.tail, s), eps(a.head, s)
        bt, bh = beta[a.tail], beta[a.head]
        for i in range(1, r[a.id] + 1):
            ti = i if et == 1 else bt - i + 1
            hi = i if eh == -1 else bh - i + 1
            edges.append(GEdge(a.id, (a.tail, ti), (a.head, hi), i))
    g = UpDownGraph(q, beta, r, eps, edges)
    for v in g.vertices:
        ks = g.incident[v]
        if len(ks) > 2 or len({g.edge_color(k) for k in ks}) != len(ks):
            raise AssertionError(f"vertex {vname(v)} violates the degree/color bound")
    return g


# -- words ------------------------------------------------------------------

def invert_word(word: Iterable[Letter]) -> tuple[Letter, ...]:
    return tuple((a, -s) for a, s in reversed(tuple(word)))


def word_str(word: Iterable[Letter], empty_at: str | None = None) -> str:
    word = tuple(word)
    if not word:
        return f"e_{empty_at}" if empty_at is not None else "e"
    return " ".join(a if s == 1 else f"{a}^-1" for a, s in word)


@dataclass
class Component:
    kind: str  # "string" or "band"
    vertices: tuple[Vertex, ...]  # walk order (band: first vertex not repeated)
    edges: tuple[int, ...]  # walk order
    word: tuple[Letter, ...]  # letters in walk order
    key: tuple
    beta: dict[str, int]
    rank: dict[str, int]
    vertex_set: frozenset = field(default=frozenset(), repr=False)

    def word_str(self) -> str:
        return word_str(self.word, self.vertices[0][0] if not self.word else None)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "word": self.word_str(),
            "vertices": [vname(v) for v in self.vertices],
            "beta": self.beta,
            "rank": self.rank,
        }


def _letter(g: UpDownGraph, k: int, frm: Vertex) -> Letter:
    e = g.edges[k]
    return (e.arrow, 1 if e.tail == frm else -1)


def _word_key(g: UpDownGraph, word: tuple[Letter, ...]) -> tuple:
    return tuple((g.q.arrow_index(a), 0 if s == 1 else 1) for a, s in word)


def _walk(g: UpDownGraph, start: Vertex, first_edge: int | None) -> tuple[list[Vertex], list[int]]:
    verts = [start]
    es: list[int] = []
    k = first_edge
    cur = start
    while k is not None:
        es.append(k)
        cur = g.other_end(k, cur)
        if cur == start:
            break
        verts.append(cur)
        nxt = [j for j in g.incident[cur] if j != k]
        k = nxt[0] if nxt else None
    return verts, es


def decompose(g: UpDownGraph) -> list[Component]:
    """Split Gamma into strings and bands with canonical words, sorted canonically."""
    seen: set[Vertex] = set()
    comps: list[Component] = []
    for v in g.vertices:
        if v in seen:
            continue
        # find the connected component
        stack, comp = [v], {v}
        while stack:
            u = stack.pop()
            for k in g.incident[u]:
                w = g.other_end(k, u)
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        ends = sorted((u for u in comp if g.degree(u) < 2), key=g.vertex_key)
        candidates = []
        if ends:
            kind = "string"
            for u in ends:
                first = g.incident[u][0] if g.incident[u] else None
                verts, es = _walk(g, u, first)
                candidates.append((verts, es))
        else:
            kind = "band"
            for u in comp:
                for first in g.incident[u]:
                    candidates.append(_walk(g, u, first))
        best = None
        for verts, es in candidates:
            word = []
            cur = verts[0]
            for k in es:
                word.append(_letter(g, k, cur))
                cur = g.other_end(k, cur)
            word = tuple(word)
            if not word:
                key = ((-1, g.q.vertex_index(verts[0][0])),)
            else:
                key = _word_key(g, word)
            vkey = tuple(g.vertex_key(u) for u in verts)
            cand = (key, vkey, tuple(verts), tuple(es), word)
            if best is None or cand[:2] < best[:2]:
                best = cand
        key, vkey, verts, es, word = best
        beta = {x: 0 for x in g.q.vertices}
        for u in verts:
            beta[u[0]] += 1
        rank = {a.id: 0 for a in g.q.arrows}
        for k in es:
            rank[g.edges[k].arrow] += 1
        if kind == "band" and len(verts) != len(es):
            raise AssertionError("band walk length mismatch")
        comps.append(Component(kind, verts, es, word, (key, vkey), beta, rank, frozenset(verts)))
    comps.sort(key=lambda c: c.key)
    return comps


def word_multiset(g: UpDownGraph) -> list[tuple]:
    """Sorted canonical word keys with per-component (beta, r) data."""
    out = []
    for c in g.components():
        out.append((c.kind, c.key[0], tuple(sorted(c.beta.items())), tuple(sorted(c.rank.items()))))
    return sorted(out)


# -- classification -------------------------------------------------------------

@dataclass
class VertexClassification:
    S: list[Vertex]
    T: list[Vertex]
    S1: list[Vertex]
    S2: list[Vertex]
    T1: list[Vertex]
    T2: list[Vertex]
    ISO: list[Vertex]

    def to_dict(self) -> dict:
        return {k: [vname(v) for v in getattr(self, k)] for k in ("S", "T", "S1", "S2", "T1", "T2", "ISO")}


def is_source(g: UpDownGraph, v: Vertex) -> bool:
    ks = g.incident[v]
    return bool(ks) and all(g.edges[k].tail == v for k in ks)


def is_target(g: UpDownGraph, v: Vertex) -> bool:
    ks = g.incident[v]
    return bool(ks) and all(g.edges[k].head == v for k in ks)


def classify_vertices(g: UpDownGraph) -> VertexClassification:
    """Sources/targets by degree; isolated vertices are only in ISO."""
    S = [v for v in g.vertices if is_source(g, v)]
    T = [v for v in g.vertices if is_target(g, v)]
    return VertexClassification(
        S=S, T=T,
        S1=[v for v in S if g.degree(v) == 1], S2=[v for v in S if g.degree(v) == 2],
        T1=[v for v in T if g.degree(v) == 1], T2=[v for v in T if g.degree(v) == 2],
        ISO=[v for v in g.vertices if g.degree(v) == 0],
    )


# -- paths in Gamma ----------------------------------------------------------------

@dataclass(frozen=True)
class GPath:
    """Walk v_0 e_1 v_1 ... e_n v_n in Gamma."""

    vertices: tuple[Vertex, ...]
    edges: tuple[int, ...]
    letters: tuple[Letter, ...]

    @property
    def start(self) -> Vertex:
        return self.vertices[0]

    @property
    def end(self) -> Vertex:
        return self.vertices[-1]

    @property
    def direct(self) -> bool:
        return all(s == 1 for _, s in self.letters)

    @property
    def inverse(self) -> bool:
        return all(s == -1 for _, s in self.letters)

    def arrows(self) -> tuple[str, ...]:
        return tuple(a for a, _ in self.letters)

    def left_sign(self, g: UpDownGraph) -> int | None:
        if not self.letters or self.letters[-1][1] != 1:
            return None
        return g.sign(self.end[0], g.edge_color(self.edges[-1]))

    def right_sign(self, g: UpDownGraph) -> int | None:
        if not self.letters or self.letters[0][1] != 1:
            return None
        return g.sign(self.start[0], g.edge_color(self.edges[0]))

    def __str__(self) -> str:
        return word_str(self.letters, self.start[0])


def _direct_back(g: UpDownGraph, v: Vertex, k: int) -> GPath:
    """Longest direct path ending at v whose last edge is k (v is head of k)."""
    verts = [v]
    es = [k]
    cur = g.edges[k].tail
    verts.append(cur)
    while True:
        nxt = [j for j in g.incident[cur] if j != es[-1] and g.edges[j].head == cur]
        if not nxt:
            break
        es.append(nxt[0])
        cur = g.edges[nxt[0]].tail
        verts.append(cur)
    verts.reverse()
    es.reverse()
    return GPath(tuple(verts), tuple(es), tuple((g.edges[j].arrow, 1) for j in es))


def _direct_forward(g: UpDownGraph, v: Vertex, k: int) -> GPath:
    verts = [v]
    es = [k]
    cur = g.edges[k].head
    verts.append(cur)
    while True:
        nxt = [j for j in g.incident[cur] if j != es[-1] and g.edges[j].tail == cur]
        if not nxt:
            break
        es.append(nxt[0])
        cur = g.edges[nxt[0]].head
        verts.append(cur)
    return GPath(tuple(verts), tuple(es), tuple((g.edges[j].arrow, 1) for j in es))


def longest_direct_paths(g: UpDownGraph, v: Vertex) -> dict[int, GPath]:
    """{sign: path}: lp^+/lp^- for a target, rp^+/rp^- for a source."""
    out: dict[int, GPath] = {}
    if is_target(g, v):
        for k in g.incident[v]:
            out[g.sign(v[0], g.edge_color(k))] = _direct_back(g, v, k)
    elif is_source(g, v):
        for k in g.incident[v]:
            out[g.sign(v[0], g.edge_color(k))] = _direct_forward(g, v, k)
    return out


def maximal_direct_path(g: UpDownGraph, v: Vertex) -> GPath:
    """The direct path of maximal length through a 1-source or 1-target."""
    (k,) = g.incident[v]
    if g.edges[k].head == v:
        return _direct_back(g, v, k)
    return _direct_forward(g, v, k)


@dataclass(frozen=True)
class ArrowChain:
    """Arrows [v]_1, [v]_2, ... (one color); the chain ends where no arrow continues it.

    ``sign`` is +1/-1 for the two chains of an isolated vertex, else None.
    """

    vertex: Vertex
    sign: int | None
    arrows: tuple[str, ...]

    def heads(self, q: ColoredQuiver) -> tuple[str, ...]:
        return tuple(q.arrow(a).head for a in self.arrows)


def _continue_chain(q: ColoredQuiver, first) -> tuple[str, ...]:
    if first is None:
        return ()
    chain = [first]
    while True:
        nxt = q.out_arrow(chain[-1].head, first.color)
        if nxt is None:
            break
        chain.append(nxt)
    return tuple(a.id for a in chain)


def arrow_chains(g: UpDownGraph, v: Vertex) -> list[ArrowChain]:
    """Chains of arrows indexing the higher syzygies attached to v.

    For a 1-source or 1-target at level x, the chain starts with the arrow out
    of x whose color differs from the color of v's single edge (the arrow that
    kills v's image in the module) and continues in that color.  An isolated
    vertex gets one chain per sign.
    """
    q = g.q
    x = v[0]
    deg = g.degree(v)
    if deg == 0:
        out = []
        for sgn in (1, -1):
            first = next((a for a in q.out_arrows(x) if g.sign(x, a.color) == sgn), None)
            out.append(ArrowChain(v, sgn, _continue_chain(q, first)))
        return out
    if deg == 1 and (is_source(g, v) or is_target(g, v)):
        used = g.edge_color(g.incident[v][0])
        first = next((a for a in q.out_arrows(x) if a.color != used), None)
        return [ArrowChain(v, None, _continue_chain(q, first))]
    raise ValueError(f"{vname(v)} is not a 1-source, 1-target or isolated vertex")


# -- structural checks -----------------------------------------------------------------

def all_direct_paths(g: UpDownGraph) -> list[GPath]:
    """Every direct path of length >= 1 (suffixes of maximal backward walks)."""
    out = []
    for v in g.vertices:
        for k in g.incident[v]:
            if g.edges[k].head != v:
                continue
            full = _direct_back(g, v, k)
            n = len(full.edges)
            for m in range(1, n + 1):
                out.append(GPath(full.vertices[n - m:], full.edges[n - m:], full.letters[n - m:]))
    return out


def lift_path(g: UpDownGraph, end: Vertex, letters: tuple[Letter, ...]) -> GPath | None:
    """Trace a direct word backwards from ``end``; None if some edge is missing."""
    verts = [end]
    es = []
    cur = end
    for a, _ in reversed(letters):
        k = g.edge_at(cur, a, as_head=True)
        if k is None:
            return None
        es.append(k)
        cur = g.edges[k].tail
        verts.append(cur)
    verts.reverse()
    es.reverse()
    return GPath(tuple(verts), tuple(es), tuple(letters))


def check_path_lifting(g: UpDownGraph) -> tuple | None:
    """Direct paths lift to every vertex on the correct side of their end.

    A left-negative path ending at index j lifts to every j' < j, a
    left-positive one to every j' > j; the lifted start has a smaller index
    exactly when the sign at the start of the first edge is +1.
    Returns None or a counterexample tuple.
    """
    for p in all_direct_paths(g):
        x, j = p.end
        sgn = p.left_sign(g)
        others = range(1, j) if sgn == -1 else range(j + 1, g.beta[x] + 1)
        for jp in others:
            lifted = lift_path(g, (x, jp), p.letters)
            if lifted is None:
                return ("missing", str(p), vname(p.end), vname((x, jp)))
            y, i = p.start
            ip = lifted.start[1]
            first_sign = g.sign(y, g.edge_color(lifted.edges[0]))
            if (ip < i) != (first_sign == 1):
                return ("orientation", str(p), vname(p.end), vname((x, jp)))
    return None


def _arrow_rank(g: UpDownGraph, arrow) -> int:
    return 0 if arrow is None else g.r[arrow.id]


def check_level_bounds(g: UpDownGraph) -> tuple | None:
    """Numeric consequences of the vertex type at each level.

    2-sources force the two outgoing ranks to overlap, 2-targets the two
    incoming ones; an isolated vertex leaves room in both index halves; a
    degree-one source or target leaves the other color unsaturated.
    """
    q = g.q
    cls = classify_vertices(g)
    for v in g.vertices:
        y = v[0]
        b = g.beta[y]
        cols = q.colors_at(y)
        if v in cls.S2 or v in cls.T2:
            fn = q.out_arrow if v in cls.S2 else q.in_arrow
            tot = sum(_arrow_rank(g, fn(y, s)) for s in cols)
            if tot <= b:
                return ("two-edge", vname(v), tot, b)
        elif v in cls.ISO:
            plus = [s for s in cols if g.sign(y, s) == 1]
            minus = [s for s in cols if g.sign(y, s) == -1]
            s = plus[0] if plus else None
            t = minus[0] if minus else None
            m1 = max(_arrow_rank(g, q.out_arrow(y, s)) if s else 0,
                     _arrow_rank(g, q.in_arrow(y, t)) if t else 0)
            m2 = max(_arrow_rank(g, q.in_arrow(y, s)) if s else 0,
                     _arrow_rank(g, q.out_arrow(y, t)) if t else 0)
            if m1 + m2 >= b:
                return ("isolated", vname(v), m1 + m2, b)
        elif v in cls.S1 or v in cls.T1:
            used = g.edge_color(g.incident[v][0])
            for t in cols:
                if t == used:
                    continue
                tot = _arrow_rank(g, q.in_arrow(y, t)) + _arrow_rank(g, q.out_arrow(y, t))
                if tot >= b:
                    return ("one-edge", vname(v), tot, b)
    return None


# -- export -------------------------------------------------------------------------

def to_dot(g: UpDownGraph, name: str = "updown") -> str:
    band_edges = {k for c in g.bands() for k in c.edges}
    lines = [f"graph {name} {{", "  rankdir=LR;", "  node [shape=circle, fontsize=10];"]
    for x in g.q.vertices:
        if g.beta[x] == 0:
            continue
        lines.append(f'  subgraph "cluster_{x}" {{')
        lines.append(f'    label="{x}";')
        for i in range(1, g.beta[x] + 1):
            lines.append(f'    "{vname((x, i))}";')
        lines.append("  }")
    for k, e in enumerate(g.edges):
        style = ", color=red, penwidth=2" if k in band_edges else ""
        lines.append(f'  "{vname(e.tail)}" -- "{vname(e.head)}" [label="{e.arrow}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
