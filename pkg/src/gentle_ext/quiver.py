"""Colored quivers, the gentle axioms and the path algebra kQ/I_c."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class QuiverError(ValueError):
    """Structurally malformed quiver (unknown endpoints, duplicate ids)."""


class ColoringError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotFiniteDimensional(ValueError):
    def __init__(self, cycle: Sequence[str]):
        super().__init__("relation-free cycle " + " ".join(cycle))
        self.cycle = tuple(cycle)


@dataclass(frozen=True)
class Arrow:
    id: str
    tail: str
    head: str
    color: str


@dataclass(frozen=True)
class Path:
    """A path in walk order: ``arrows[0]`` is traversed first.

    A trivial path has ``start == end`` and no arrows.
    """

    start: str
    end: str
    arrows: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.arrows)

    def __str__(self) -> str:
        if not self.arrows:
            return f"e_{self.start}"
        # composition order, last arrow leftmost
        return " ".join(reversed(self.arrows))


class ColoredQuiver:
    """Quiver with a coloring of its arrows.

    Vertex and arrow order is the declaration order and is used for every
    deterministic ordering downstream.  Coloring validity is *not* enforced
    here; :func:`check_gentle` reports it.
    """

    def __init__(self, vertices: Iterable[str], arrows: Iterable[Arrow | tuple]):
        self.vertices: tuple[str, ...] = tuple(str(v) for v in vertices)
        arrs = []
        for a in arrows:
            if not isinstance(a, Arrow):
                a = Arrow(*(str(t) for t in a))
            arrs.append(a)
        self.arrows: tuple[Arrow, ...] = tuple(arrs)
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex id")
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            dup = next(i for i in ids if ids.count(i) > 1)
            raise QuiverError(f"duplicate arrow id {dup!r}")
        vset = set(self.vertices)
        for a in self.arrows:
            if a.tail not in vset or a.head not in vset:
                raise QuiverError(f"arrow {a.id!r} has an undeclared endpoint")
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        self._aindex = {a.id: i for i, a in enumerate(self.arrows)}
        self._by_id = {a.id: a for a in self.arrows}
        self.colors: tuple[str, ...] = tuple(sorted({a.color for a in self.arrows}))
        self._out: dict[tuple[str, str], list[Arrow]] = {}
        self._in: dict[tuple[str, str], list[Arrow]] = {}
        for a in self.arrows:
            self._out.setdefault((a.tail, a.color), []).append(a)
            self._in.setdefault((a.head, a.color), []).append(a)

    def __repr__(self) -> str:
        return f"ColoredQuiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColoredQuiver):
            return NotImplemented
        return self.vertices == other.vertices and self.arrows == other.arrows

    def __hash__(self) -> int:
        return hash((self.vertices, self.arrows))

    def arrow(self, aid: str) -> Arrow:
        return self._by_id[aid]

    def vertex_index(self, v: str) -> int:
        return self._vindex[v]

    def arrow_index(self, aid: str) -> int:
        return self._aindex[aid]

    def color(self, aid: str) -> str:
        return self._by_id[aid].color

    def out_arrows(self, x: str) -> list[Arrow]:
        return [a for a in self.arrows if a.tail == x]

    def in_arrows(self, x: str) -> list[Arrow]:
        return [a for a in self.arrows if a.head == x]

    def out_arrow(self, x: str, color: str) -> Arrow | None:
        found = self._out.get((x, color), ())
        return found[0] if found else None

    def in_arrow(self, x: str, color: str) -> Arrow | None:
        found = self._in.get((x, color), ())
        return found[0] if found else None

    def colors_at(self, x: str) -> tuple[str, ...]:
        return tuple(sorted({a.color for a in self.arrows if x in (a.tail, a.head)}))

    def incidences(self) -> tuple[tuple[str, str], ...]:
        """The vertex/color incidence set, in vertex then color order."""
        return tuple((x, s) for x in self.vertices for s in self.colors_at(x))

    def is_isolated(self, x: str) -> bool:
        return not self.colors_at(x)

    def composable_pairs(self) -> list[tuple[str, str]]:
        """Pairs (a, b) with head(a) == tail(b), i.e. the path 'b a'."""
        return [(a.id, b.id) for a in self.arrows for b in self.arrows if a.head == b.tail]

    def relations(self) -> tuple[tuple[str, str], ...]:
        """Generators of I_c: monochromatic composable pairs (a, b), meaning b*a = 0."""
        return tuple((a, b) for a, b in self.composable_pairs() if self.color(a) == self.color(b))

    def is_relation(self, a: str, b: str) -> bool:
        pa, pb = self._by_id[a], self._by_id[b]
        return pa.head == pb.tail and pa.color == pb.color

    def color_path(self, color: str) -> list[Arrow]:
        """Arrows of one color in path order (assumes a valid coloring)."""
        cls = [a for a in self.arrows if a.color == color]
        heads = {a.head for a in cls}
        start = [a for a in cls if a.tail not in heads]
        if len(start) != 1:
            raise ColoringError(f"color {color!r} is not a directed path")
        out = [start[0]]
        while len(out) < len(cls):
            nxt = self.out_arrow(out[-1].head, color)
            if nxt is None:
                raise ColoringError(f"color {color!r} is not a directed path")
            out.append(nxt)
        return out

    # -- paths ------------------------------------------------------------
    def trivial(self, x: str) -> Path:
        return Path(x, x, ())

    def path(self, arrows: Sequence[str], start: str | None = None) -> Path:
        """Build a path from arrows in walk order; raises if not composable."""
        arrows = tuple(arrows)
        if not arrows:
            if start is None:
                raise ValueError("trivial path needs a start vertex")
            return self.trivial(start)
        for a, b in zip(arrows, arrows[1:]):
            if self._by_id[a].head != self._by_id[b].tail:
                raise ValueError(f"arrows {a} and {b} are not composable")
        first = self._by_id[arrows[0]]
        if start is not None and start != first.tail:
            raise ValueError("start vertex does not match first arrow")
        return Path(first.tail, self._by_id[arrows[-1]].head, arrows)

    def is_relation_free(self, p: Path) -> bool:
        return not any(self.is_relation(a, b) for a, b in zip(p.arrows, p.arrows[1:]))

    def concat(self, p: Path, q: Path) -> Path | None:
        """``p`` then ``q`` in kQ/I_c; None when the product is zero."""
        if p.end != q.start:
            return None
        if p.arrows and q.arrows and self.is_relation(p.arrows[-1], q.arrows[0]):
            return None
        return Path(p.start, q.end, p.arrows + q.arrows)


@dataclass
class Violation:
    axiom: str
    message: str
    witness: tuple = ()


@dataclass
class GentleReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def finite_dimensional(self) -> bool:
        return not any(v.axiom == "finite-dimensional" for v in self.violations)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"axiom": v.axiom, "message": v.message, "witness": list(v.witness)}
                for v in self.violations
            ],
        }


def _coloring_violations(q: ColoredQuiver) -> list[Violation]:
    out = []
    for s in q.colors:
        cls = [a for a in q.arrows if a.color == s]
        for x in q.vertices:
            tails = [a.id for a in cls if a.tail == x]
            heads = [a.id for a in cls if a.head == x]
            if len(tails) > 1:
                out.append(Violation("coloring", f"vertex {x} is the tail of several {s}-arrows",
                                     tuple(tails)))
            if len(heads) > 1:
                out.append(Violation("coloring", f"vertex {x} is the head of several {s}-arrows",
                                     tuple(heads)))
        try:
            q.color_path(s)
        except ColoringError:
            out.append(Violation("coloring", f"color {s} is not a single acyclic directed path",
                                 tuple(a.id for a in cls)))
    return out


def relation_free_cycle(q: ColoredQuiver) -> list[str] | None:
    """A cycle in the graph on arrows with edges a -> b for a nonzero 'b a'."""
    succ = {a.id: [b for (x, b) in q.composable_pairs() if x == a.id and not q.is_relation(x, b)]
            for a in q.arrows}
    state: dict[str, int] = {}
    stack: list[str] = []

    def visit(a: str) -> list[str] | None:
        state[a] = 1
        stack.append(a)
        for b in succ[a]:
            if state.get(b) == 1:
                return stack[stack.index(b):]
            if b not in state:
                found = visit(b)
                if found:
                    return found
        stack.pop()
        state[a] = 2
        return None

    for a in q.arrows:
        if a.id not in state:
            cyc = visit(a.id)
            if cyc:
                return list(cyc)
    return None


def check_gentle(q: ColoredQuiver) -> GentleReport:
    """Validate the gentle axioms for kQ/I_c, the coloring and finite dimension."""
    rep = GentleReport()
    for x in q.vertices:
        ins = [a.id for a in q.in_arrows(x)]
        outs = [a.id for a in q.out_arrows(x)]
        if len(ins) > 2:
            rep.violations.append(Violation("i", f"vertex {x} is the head of {len(ins)} arrows",
                                            tuple(ins)))
        if len(outs) > 2:
            rep.violations.append(Violation("i", f"vertex {x} is the tail of {len(outs)} arrows",
                                            tuple(outs)))
    for b in q.arrows:
        after = [a for a in q.out_arrows(b.head)]
        before = [c for c in q.in_arrows(b.tail)]
        free_after = [a.id for a in after if not q.is_relation(b.id, a.id)]
        free_before = [c.id for c in before if not q.is_relation(c.id, b.id)]
        rel_after = [a.id for a in after if q.is_relation(b.id, a.id)]
        rel_before = [c.id for c in before if q.is_relation(c.id, b.id)]
        if len(free_after) > 1:
            rep.violations.append(Violation(
                "ii", f"arrow {b.id} has several nonzero continuations", tuple(free_after)))
        if len(free_before) > 1:
            rep.violations.append(Violation(
                "ii", f"arrow {b.id} has several nonzero predecessors", tuple(free_before)))
        if len(rel_after) > 1:
            rep.violations.append(Violation(
                "iii", f"arrow {b.id} has several zero continuations", tuple(rel_after)))
        if len(rel_before) > 1:
            rep.violations.append(Violation(
                "iii", f"arrow {b.id} has several zero predecessors", tuple(rel_before)))
    rep.violations.extend(_coloring_violations(q))
    cyc = relation_free_cycle(q)
    if cyc:
        rep.violations.append(Violation(
            "finite-dimensional", "relation-free cycle " + " ".join(cyc), tuple(cyc)))
    return rep


def infer_coloring(vertices: Iterable[str], arrows: Iterable[tuple[str, str, str]],
                   relations: Iterable[tuple[str, str]]) -> ColoredQuiver:
    """Find a coloring c with I = I_c for monomial length-two relations.

    ``relations`` holds pairs (a, b) meaning the path ``b a`` is zero.  Arrows
    joined by a relation are forced to share a color; the union-find classes
    are then the only candidate coloring, so failure of a class to be a
    directed path (or a composable same-class pair outside the relation set)
    is a genuine obstruction and is reported with a witness.
    """
    vertices = [str(v) for v in vertices]
    arrows = [tuple(str(t) for t in a) for a in arrows]
    ids = [a[0] for a in arrows]
    info = {a[0]: a for a in arrows}
    parent = {i: i for i in ids}

    def find(i: str) -> str:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    rels = []
    for a, b in relations:
        a, b = str(a), str(b)
        if a not in info or b not in info:
            raise ColoringError(f"relation ({a}, {b}) uses an unknown arrow", (a, b))
        if info[a][2] != info[b][1]:
            raise ColoringError(f"relation {b}{a} is not a path", (a, b))
        rels.append((a, b))
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb, key=ids.index)] = min(ra, rb, key=ids.index)

    roots = []
    for i in ids:
        r = find(i)
        if r not in roots:
            roots.append(r)
    color_of = {i: f"c{roots.index(find(i))}" for i in ids}
    q = ColoredQuiver(vertices, [(i, info[i][1], info[i][2], color_of[i]) for i in ids])
    bad = _coloring_violations(q)
    if bad:
        raise ColoringError("forced color class is not a directed path: " + bad[0].message,
                            bad[0].witness)
    given = set(rels)
    for pair in q.relations():
        if pair not in given:
            raise ColoringError(
                f"path {pair[1]}{pair[0]} would be a relation of every compatible coloring", pair)
    return q


# -- sign functions ------------------------------------------------------------

@dataclass(frozen=True)
class SignFunction:
    """Map from vertex/color incidences to +1/-1, opposite at the two colors of a vertex."""

    values: tuple[tuple[tuple[str, str], int], ...]

    def __call__(self, x: str, color: str) -> int:
        return dict(self.values)[(x, color)]

    def as_dict(self) -> dict[tuple[str, str], int]:
        return dict(self.values)

    @classmethod
    def from_mapping(cls, q: ColoredQuiver, mapping: Mapping[tuple[str, str], int]) -> "SignFunction":
        inc = q.incidences()
        if set(mapping) != set(inc):
            missing = set(inc) - set(mapping)
            extra = set(mapping) - set(inc)
            raise ValueError(f"sign function domain mismatch: missing {sorted(missing)}, "
                             f"extra {sorted(extra)}")
        for v in mapping.values():
            if v not in (1, -1):
                raise ValueError("sign values must be +1 or -1")
        for x in q.vertices:
            cols = q.colors_at(x)
            for s1, s2 in itertools.combinations(cols, 2):
                if mapping[(x, s1)] != -mapping[(x, s2)]:
                    raise ValueError(f"signs at vertex {x} for colors {s1}, {s2} must differ")
        return cls(tuple((k, int(mapping[k])) for k in inc))

    def flipped_at(self, x: str) -> "SignFunction":
        return SignFunction(tuple(((v, s), -e if v == x else e) for (v, s), e in self.values))


def enumerate_sign_functions(q: ColoredQuiver) -> list[SignFunction]:
    per_vertex = []
    for x in q.vertices:
        cols = q.colors_at(x)
        if not cols:
            continue
        if len(cols) > 2:
            return []
        choices = []
        for e in (1, -1):
            choices.append({(x, cols[0]): e, **({(x, cols[1]): -e} if len(cols) == 2 else {})})
        per_vertex.append(choices)
    out = []
    for combo in itertools.product(*per_vertex):
        m: dict[tuple[str, str], int] = {}
        for part in combo:
            m.update(part)
        out.append(SignFunction.from_mapping(q, m))
    return out


def canonical_sign(q: ColoredQuiver) -> SignFunction:
    """+1 on the first color (sorted) at each vertex, -1 on the other."""
    m = {}
    for x in q.vertices:
        for k, s in enumerate(q.colors_at(x)):
            m[(x, s)] = 1 if k == 0 else -1
    return SignFunction.from_mapping(q, m)


# -- projective modules -----------------------------------------------------------

class PathBasis(dict):
    """vertex -> relation-free paths starting there (the basis of P_x)."""

    def dim(self, x: str) -> int:
        return len(self[x])

    def index(self, x: str) -> dict[Path, int]:
        cache = self.__dict__.setdefault("_index", {})
        if x not in cache:
            cache[x] = {p: i for i, p in enumerate(self[x])}
        return cache[x]


def projective_basis(q: ColoredQuiver) -> PathBasis:
    """Relation-free paths from each vertex, ordered by length then arrow ids."""
    cyc = relation_free_cycle(q)
    if cyc:
        raise NotFiniteDimensional(cyc)
    basis = PathBasis()
    for x in q.vertices:
        found = [q.trivial(x)]
        frontier = [q.trivial(x)]
        while frontier:
            nxt = []
            for p in frontier:
                for b in q.out_arrows(p.end):
                    if p.arrows and q.is_relation(p.arrows[-1], b.id):
                        continue
                    nxt.append(Path(p.start, b.head, p.arrows + (b.id,)))
            nxt.sort(key=lambda p: p.arrows)
            found.extend(nxt)
            frontier = nxt
        basis[x] = found
    return basis
