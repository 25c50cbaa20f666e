"""Rank maps for a dimension vector and enumeration of the maximal ones."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Mapping

from .quiver import ColoredQuiver


def as_beta(q: ColoredQuiver, beta: Mapping[str, int] | tuple | list) -> dict[str, int]:
    """Normalize a dimension vector given as a mapping or in vertex order."""
    if isinstance(beta, Mapping):
        extra = [x for x in beta if x not in q.vertices]
        if extra:
            raise ValueError(f"unknown vertices in dimension vector: {extra}")
        out = {x: int(beta.get(x, 0)) for x in q.vertices}
    else:
        beta = list(beta)
        if len(beta) != len(q.vertices):
            raise ValueError("dimension vector length does not match vertex count")
        out = {x: int(b) for x, b in zip(q.vertices, beta)}
    if any(v < 0 for v in out.values()):
        raise ValueError("dimension vector entries must be non-negative")
    return out


def as_rank(q: ColoredQuiver, r: Mapping[str, int] | tuple | list) -> dict[str, int]:
    if isinstance(r, Mapping):
        extra = [a for a in r if a not in {b.id for b in q.arrows}]
        if extra:
            raise ValueError(f"unknown arrows in rank map: {extra}")
        return {a.id: int(r.get(a.id, 0)) for a in q.arrows}
    r = list(r)
    if len(r) != len(q.arrows):
        raise ValueError("rank map length does not match arrow count")
    return {a.id: int(v) for a, v in zip(q.arrows, r)}


@dataclass(frozen=True)
class RankMap:
    values: tuple[tuple[str, int], ...]
    maximal: bool

    def __getitem__(self, aid: str) -> int:
        return dict(self.values)[aid]

    def as_dict(self) -> dict[str, int]:
        return dict(self.values)

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(v for _, v in self.values)


@dataclass(frozen=True)
class RankViolation:
    kind: str  # "bound" or "composition"
    arrows: tuple[str, ...]
    message: str


def validate_rank_map(q: ColoredQuiver, beta, r) -> RankViolation | None:
    """First violated constraint in arrow order, or None."""
    beta = as_beta(q, beta)
    r = as_rank(q, r)
    for a in q.arrows:
        bound = min(beta[a.tail], beta[a.head])
        if r[a.id] < 0:
            return RankViolation("bound", (a.id,), f"r({a.id}) = {r[a.id]} is negative")
        if r[a.id] > bound:
            return RankViolation("bound", (a.id,),
                                 f"r({a.id}) = {r[a.id]} > min(beta_{a.tail}, beta_{a.head}) = {bound}")
    for a1, a2 in q.relations():
        mid = q.arrow(a1).head
        if r[a1] + r[a2] > beta[mid]:
            return RankViolation("composition", (a1, a2),
                                 f"r({a2}) + r({a1}) = {r[a1] + r[a2]} > beta_{mid} = {beta[mid]}")
    return None


def is_maximal(q: ColoredQuiver, beta, r) -> bool:
    """Valid and no single coordinate can be raised (equivalent to maximal here)."""
    beta = as_beta(q, beta)
    r = as_rank(q, r)
    if validate_rank_map(q, beta, r) is not None:
        return False
    for a in q.arrows:
        bumped = dict(r)
        bumped[a.id] += 1
        if validate_rank_map(q, beta, bumped) is None:
            return False
    return True


def _chain_maxima(bounds: list[int], mids: list[int]) -> list[tuple[int, ...]]:
    """Maximal vectors with r_i <= bounds[i] and r_i + r_{i+1} <= mids[i].

    A coordinate is maximal once both of its neighbours are fixed, so each
    coordinate is checked as soon as its right neighbour is chosen.
    """
    m = len(bounds)
    out: list[tuple[int, ...]] = []
    cur: list[int] = []

    def cap(i: int) -> int:
        c = bounds[i]
        if i > 0:
            c = min(c, mids[i - 1] - cur[i - 1])
        if i + 1 < m and len(cur) > i + 1:
            c = min(c, mids[i] - cur[i + 1])
        return c

    def rec(i: int) -> None:
        if i == m:
            if m and cur[m - 1] != cap(m - 1):
                return
            out.append(tuple(cur))
            return
        hi = bounds[i] if i == 0 else min(bounds[i], mids[i - 1] - cur[i - 1])
        for v in range(hi, -1, -1):
            cur.append(v)
            if i > 0 and cur[i - 1] != cap(i - 1):
                cur.pop()
                continue
            rec(i + 1)
            cur.pop()

    rec(0)
    return out


def enumerate_maximal_rank_maps(q: ColoredQuiver, beta) -> list[RankMap]:
    """All maximal rank maps, per color chain then cartesian product, sorted."""
    beta = as_beta(q, beta)
    per_color = []
    for s in q.colors:
        chain = q.color_path(s)
        bounds = [min(beta[a.tail], beta[a.head]) for a in chain]
        mids = [beta[a.head] for a in chain[:-1]]
        per_color.append([(tuple(a.id for a in chain), vec) for vec in _chain_maxima(bounds, mids)])
    maps = []
    for combo in itertools.product(*per_color):
        r = {}
        for ids, vec in combo:
            r.update(zip(ids, vec))
        maps.append(tuple(r.get(a.id, 0) for a in q.arrows))
    maps.sort(reverse=True)
    return [RankMap(tuple(zip((a.id for a in q.arrows), m)), True) for m in maps]


def rank_map(q: ColoredQuiver, beta, r) -> RankMap:
    """Wrap a user-supplied rank map, computing its maximality flag."""
    rd = as_rank(q, r)
    return RankMap(tuple((a.id, rd[a.id]) for a in q.arrows), is_maximal(q, beta, rd))


def brute_force_maximal(q: ColoredQuiver, beta) -> set[tuple[int, ...]]:
    """Reference enumeration: all valid rank maps, then pointwise-maximal filter."""
    import numpy as np

    beta = as_beta(q, beta)
    ranges = [range(min(beta[a.tail], beta[a.head]) + 1) for a in q.arrows]
    valid = [v for v in itertools.product(*ranges)
             if validate_rank_map(q, beta, dict(zip((a.id for a in q.arrows), v))) is None]
    if not q.arrows:
        return {()}
    arr = np.array(valid, dtype=np.int64)
    keep = set()
    for i, row in enumerate(arr):
        ge = np.all(arr >= row, axis=1) & np.any(arr > row, axis=1)
        if not ge.any():
            keep.add(tuple(int(v) for v in row))
    return keep


def check_triple_saturation(q: ColoredQuiver, beta, r) -> tuple[str, str, str] | None:
    """Monochromatic triple a1,a2,a3 with slack on both sides of a2, if any."""
    beta = as_beta(q, beta)
    r = as_rank(q, r)
    for s in q.colors:
        chain = q.color_path(s)
        for a1, a2, a3 in zip(chain, chain[1:], chain[2:]):
            x1, x2 = a1.head, a2.head
            if r[a1.id] + r[a2.id] < beta[x1] and r[a2.id] + r[a3.id] < beta[x2]:
                return (a1.id, a2.id, a3.id)
    return None


def random_maximal_rank_map(q: ColoredQuiver, beta, rng: random.Random) -> RankMap:
    maps = enumerate_maximal_rank_maps(q, beta)
    return maps[rng.randrange(len(maps))]
