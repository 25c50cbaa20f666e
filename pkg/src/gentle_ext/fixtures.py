"""Named example quivers and random gentle test cases."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .quiver import ColoredQuiver, SignFunction, check_gentle, enumerate_sign_functions
from .ranks import enumerate_maximal_rank_maps


def a2() -> ColoredQuiver:
    return ColoredQuiver(["1", "2"], [("a", "1", "2", "s")])


def a3_rel() -> ColoredQuiver:
    return ColoredQuiver(["1", "2", "3"], [("a", "1", "2", "s"), ("b", "2", "3", "s")])


def a3_free() -> ColoredQuiver:
    return ColoredQuiver(["1", "2", "3"], [("a", "1", "2", "s"), ("b", "2", "3", "t")])


def a4_rel() -> ColoredQuiver:
    return ColoredQuiver(["1", "2", "3", "4"],
                         [("a", "1", "2", "s"), ("b", "2", "3", "s"), ("c", "3", "4", "s")])


def kronecker() -> ColoredQuiver:
    return ColoredQuiver(["1", "2"], [("a", "1", "2", "s"), ("b", "1", "2", "t")])


def oriented_cycle() -> ColoredQuiver:
    """Relation-free 2-cycle; not finite-dimensional."""
    return ColoredQuiver(["1", "2"], [("a", "1", "2", "s"), ("b", "2", "1", "t")])


def triangle() -> ColoredQuiver:
    """Oriented 3-cycle with one zero relation; gentle and finite-dimensional."""
    return ColoredQuiver(["1", "2", "3"],
                         [("a", "1", "2", "s"), ("b", "2", "3", "s"), ("c", "3", "1", "t")])


def with_isolated() -> ColoredQuiver:
    return ColoredQuiver(["1", "2", "3"], [("a", "1", "2", "s")])


def six_vertex() -> ColoredQuiver:
    """Six vertices, four two-arrow colors g, b, r, p."""
    return ColoredQuiver(
        ["1", "2", "3", "4", "5", "6"],
        [("g1", "1", "5", "g"), ("g2", "5", "3", "g"),
         ("b1", "4", "5", "b"), ("b2", "5", "6", "b"),
         ("r1", "1", "2", "r"), ("r2", "2", "3", "r"),
         ("p1", "4", "2", "p"), ("p2", "2", "6", "p")],
    )


SIX_VERTEX_BETA = {"1": 3, "2": 4, "3": 1, "4": 2, "5": 3, "6": 2}
SIX_VERTEX_RANK = {"r1": 3, "p1": 2, "r2": 1, "p2": 2, "g1": 2, "b1": 2, "g2": 1, "b2": 1}
_SIX_PLUS = {("1", "g"), ("2", "p"), ("3", "g"), ("4", "b"), ("5", "b"), ("6", "p")}


def six_vertex_sign(q: ColoredQuiver | None = None) -> SignFunction:
    q = q or six_vertex()
    return SignFunction.from_mapping(q, {k: (1 if k in _SIX_PLUS else -1) for k in q.incidences()})


NAMED = {
    "A2": a2,
    "A3REL": a3_rel,
    "A3FREE": a3_free,
    "A4REL": a4_rel,
    "KRON": kronecker,
    "TRI": triangle,
    "ISO": with_isolated,
    "EX26": six_vertex,
}


def random_gentle_quiver(rng: random.Random, max_vertices: int = 6, max_colors: int | None = None,
                         max_color_length: int = 3, keep_isolated: bool = False) -> ColoredQuiver:
    """Random colored quiver, each color a directed path, at most two colors per vertex.

    Such a coloring always satisfies the gentle axioms; samples with a
    relation-free cycle are rejected and redrawn.
    """
    while True:
        n = rng.randint(2, max_vertices)
        verts = [str(i) for i in range(1, n + 1)]
        cap = {v: 2 for v in verts}
        ncol = rng.randint(1, max_colors or n)
        arrows = []
        for c in range(ncol):
            length = rng.randint(1, max_color_length)
            avail = [v for v in verts if cap[v] > 0]
            if len(avail) < 2:
                break
            k = min(length + 1, len(avail))
            seq = rng.sample(avail, k)
            for v in seq:
                cap[v] -= 1
            color = chr(ord("a") + c) if c < 26 else f"c{c}"
            for i, (t, h) in enumerate(zip(seq, seq[1:]), start=1):
                arrows.append((f"{color}{i}", t, h, color))
        if not arrows:
            continue
        used = {a[1] for a in arrows} | {a[2] for a in arrows}
        if not keep_isolated:
            verts = [v for v in verts if v in used]
        q = ColoredQuiver(verts, arrows)
        if check_gentle(q).ok:
            return q


@dataclass
class Case:
    q: ColoredQuiver
    beta: dict[str, int]
    r: dict[str, int]
    eps: SignFunction


def random_case(rng: random.Random, max_vertices: int = 6, max_beta: int = 4,
                require_band: bool = False, tries: int = 200) -> Case:
    from .graph import build_updown_graph

    for _ in range(tries):
        q = random_gentle_quiver(rng, max_vertices)
        beta = {x: rng.randint(0, max_beta) for x in q.vertices}
        maps = enumerate_maximal_rank_maps(q, beta)
        r = maps[rng.randrange(len(maps))].as_dict()
        signs = enumerate_sign_functions(q)
        eps = signs[rng.randrange(len(signs))]
        if require_band and not build_updown_graph(q, beta, r, eps).bands():
            continue
        return Case(q, beta, r, eps)
    raise RuntimeError("could not draw a case with the requested properties")


def random_suite(seed: int, count: int, **kw) -> list[Case]:
    rng = random.Random(seed)
    return [random_case(rng, **kw) for _ in range(count)]
