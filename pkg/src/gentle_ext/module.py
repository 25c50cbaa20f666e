"""Explicit matrices of the generic module M_lambda read off the up-and-down graph."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .graph import UpDownGraph, Vertex, build_updown_graph, classify_vertices, vname, word_multiset
from .linalg import RATIONAL, Field, SparseMatrix, rank
from .quiver import ColoredQuiver, enumerate_sign_functions

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
           83, 89, 97)


def nth_prime(n: int) -> int:
    """0 -> 2, 1 -> 3, ..."""
    if n < len(_PRIMES):
        return _PRIMES[n]
    found = list(_PRIMES)
    c = found[-1] + 2
    while len(found) <= n:
        if all(c % p for p in found if p * p <= c):
            found.append(c)
        c += 2
    return found[n]


class ModuleError(ValueError):
    pass


@dataclass
class BandParameters:
    """Per band (canonical band order): marked target theta and scalar lam."""

    theta: dict[int, Vertex]
    lam: dict[int, Fraction]

    def to_dict(self) -> dict:
        return {
            "theta": {str(b): vname(v) for b, v in sorted(self.theta.items())},
            "lambda": {str(b): str(x) for b, x in sorted(self.lam.items())},
        }


def band_targets(g: UpDownGraph, b: int) -> list[Vertex]:
    band = g.bands()[b]
    cls = classify_vertices(g)
    tset = set(cls.T)
    return sorted((v for v in band.vertices if v in tset), key=g.vertex_key)


def default_parameters(g: UpDownGraph, lam: Mapping[int, object] | None = None,
                       theta: Mapping[int, Vertex] | None = None) -> BandParameters:
    """First target (by vertex order) as theta; the (b+1)-th prime as lambda."""
    nb = len(g.bands())
    lam = dict(lam or {})
    theta = dict(theta or {})
    for b in list(lam) + list(theta):
        if not 0 <= b < nb:
            raise ModuleError(f"band index {b} out of range (graph has {nb} bands)")
    out_t, out_l = {}, {}
    for b in range(nb):
        out_t[b] = theta.get(b, band_targets(g, b)[0])
        v = Fraction(lam.get(b, nth_prime(b)))
        if v == 0:
            raise ModuleError(f"band parameter for band {b} must be nonzero")
        out_l[b] = v
    return BandParameters(out_t, out_l)


@dataclass
class Representation:
    q: ColoredQuiver
    beta: dict[str, int]
    matrices: dict[str, SparseMatrix]
    graph: UpDownGraph | None = None
    params: BandParameters | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def dim(self) -> int:
        return sum(self.beta.values())

    def path_action(self, arrows: Sequence[str], start: str) -> SparseMatrix:
        """Matrix of a path given in walk order (first arrow applied first)."""
        key = (tuple(arrows), start)
        if key not in self._cache:
            m = SparseMatrix.identity(self.beta[start])
            for a in arrows:
                m = self.matrices[a] @ m
            self._cache[key] = m
        return self._cache[key]

    def restrict(self, keep: Mapping[str, list[int]]) -> "Representation":
        """Sub-representation on the listed 0-based basis indices (must be invariant)."""
        beta = {x: len(keep.get(x, [])) for x in self.q.vertices}
        mats = {}
        for a in self.q.arrows:
            m = self.matrices[a.id].submatrix(keep.get(a.head, []), keep.get(a.tail, []))
            mats[a.id] = m
        return Representation(self.q, beta, mats)

    def to_dict(self) -> dict:
        return {
            "beta": dict(self.beta),
            "matrices": {
                a.id: [[str(v) for v in row] for row in self.matrices[a.id].to_dense()]
                for a in self.q.arrows
            },
        }


def build_module(g: UpDownGraph, params: BandParameters | None = None) -> Representation:
    """Entries are 1 per edge, lambda_b on the edge into theta(b) whose head sign is +1."""
    if params is None:
        params = default_parameters(g)
    bands = g.bands()
    cls_T = set(classify_vertices(g).T)
    marked: dict[Vertex, int] = {}
    for b, band in enumerate(bands):
        if b not in params.theta or b not in params.lam:
            raise ModuleError(f"missing parameters for band {b}")
        t = params.theta[b]
        if t not in band.vertex_set or t not in cls_T:
            raise ModuleError(f"theta({b}) = {vname(t)} is not a target on band {b}")
        if params.lam[b] == 0:
            raise ModuleError(f"band parameter for band {b} must be nonzero")
        marked[t] = b
    ents: dict[str, dict] = {a.id: {} for a in g.q.arrows}
    for e in g.edges:
        hx = e.head[0]
        val = Fraction(1)
        if e.head in marked and g.sign(hx, g.q.color(e.arrow)) == 1:
            val = params.lam[marked[e.head]]
        ents[e.arrow][(e.head[1] - 1, e.tail[1] - 1)] = val
    mats = {}
    for a in g.q.arrows:
        mats[a.id] = SparseMatrix(g.beta[a.head], g.beta[a.tail], ents[a.id])
    return Representation(g.q, dict(g.beta), mats, g, params)


def verify_relations(m: Representation) -> tuple[str, str] | None:
    for a, b in m.q.relations():
        if not (m.matrices[b] @ m.matrices[a]).is_zero():
            return (a, b)
    return None


def verify_rank_stratum(m: Representation, r: Mapping[str, int], fld: Field = RATIONAL) -> str | None:
    for a in m.q.arrows:
        if rank(m.matrices[a.id], fld) != r[a.id]:
            return a.id
    return None


def component_summands(m: Representation) -> list[Representation]:
    """The direct summands of a built module, one per component of its graph."""
    g = m.graph
    out = []
    for comp in g.components():
        keep: dict[str, list[int]] = {}
        for v in sorted(comp.vertices, key=g.vertex_key):
            keep.setdefault(v[0], []).append(v[1] - 1)
        out.append(m.restrict(keep))
    return out


@dataclass
class InvarianceReport:
    ok: bool
    sign_functions: int
    theta_choices: int
    words: list
    end_dims: list[int]
    mismatch: str | None = None

    def to_dict(self) -> dict:
        return {"ok": self.ok, "sign_functions": self.sign_functions,
                "theta_choices": self.theta_choices, "end_dims": self.end_dims,
                "mismatch": self.mismatch}


def theta_epsilon_invariance(q: ColoredQuiver, beta, r, fld: Field = RATIONAL,
                             max_theta: int = 64, signs=None) -> InvarianceReport:
    """Word multisets across sign functions; Hom fingerprints across all theta choices.

    ``signs`` defaults to every sign function of ``q``.
    """
    from .cocycle import hom_dim

    signs = enumerate_sign_functions(q) if signs is None else list(signs)
    words = None
    end_dims: list[int] = []
    n_theta = 0
    for eps in signs:
        g = build_updown_graph(q, beta, r, eps)
        w = word_multiset(g)
        if words is None:
            words = w
        elif w != words:
            return InvarianceReport(False, len(signs), n_theta, words, end_dims,
                                    "component words differ between sign functions")
        nb = len(g.bands())
        choices = list(itertools.islice(
            itertools.product(*(band_targets(g, b) for b in range(nb))), max_theta))
        base_t = dict(enumerate(choices[0]))
        lam0 = default_parameters(g).lam
        # a moved marker may meet its band from the other side, which inverts lambda_b;
        # the family is what must not change, so each choice has to match base(lambda^s)
        bases = []
        for flips in itertools.product((1, -1), repeat=nb):
            lam = {b: lam0[b] ** s for b, s in enumerate(flips)}
            bases.append(build_module(g, default_parameters(g, lam=lam, theta=base_t)))
        for ch in choices:
            mm = build_module(g, default_parameters(g, theta=dict(enumerate(ch))))
            n_theta += 1
            d = hom_dim(mm, mm, fld)
            end_dims.append(d)
            if not any(hom_dim(b0, mm, fld) == d and hom_dim(mm, b0, fld) == d for b0 in bases):
                return InvarianceReport(False, len(signs), n_theta, words, end_dims,
                                        "a theta choice gives a module outside the base family")
    ok = len(set(end_dims)) <= 1
    return InvarianceReport(ok, len(signs), n_theta, words or [], end_dims,
                            None if ok else "endomorphism dimensions differ")
