"""Exact sparse matrices and rank over Q or a prime field."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping

import numpy as np

from . import _kernels


@dataclass(frozen=True)
class Field:
    """``p is None`` means the rationals; otherwise GF(p)."""

    p: int | None = None

    @classmethod
    def parse(cls, text: str) -> "Field":
        text = text.strip()
        if text == "rational":
            return cls(None)
        if text.startswith("fp:"):
            p = int(text[3:])
            if p <= 2 or not _is_prime(p):
                raise ValueError(f"fp modulus must be an odd prime, got {p}")
            if p >= 2 ** 31:
                raise ValueError("fp modulus must be below 2**31")
            return cls(p)
        raise ValueError(f"unknown field {text!r}")

    def __str__(self) -> str:
        return "rational" if self.p is None else f"fp:{self.p}"

    def is_zero(self, x: Fraction) -> bool:
        if self.p is None:
            return x == 0
        return self.reduce(x) == 0

    def reduce(self, x: Fraction) -> int:
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise ZeroDivisionError(f"{x} is not defined modulo {self.p}")
        return x.numerator * pow(x.denominator, -1, self.p) % self.p


RATIONAL = Field(None)
DEFAULT_PRIME = 2147483647


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class SparseMatrix:
    """Dictionary-of-keys matrix with exact Fraction entries.

    Zero entries are never stored.
    """

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int, entries: Mapping[tuple[int, int], Fraction] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries: dict[tuple[int, int], Fraction] = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < nrows and 0 <= j < ncols):
                    raise IndexError(f"entry {(i, j)} outside {nrows}x{ncols}")
                if v != 0:
                    self.entries[(i, j)] = Fraction(v)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "SparseMatrix":
        return cls(nrows, ncols)

    @classmethod
    def from_dense(cls, rows: Iterable[Iterable]) -> "SparseMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        ent = {(i, j): Fraction(v) for i, r in enumerate(rows) for j, v in enumerate(r) if v != 0}
        return cls(len(rows), ncols, ent)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return self.entries.get(key, Fraction(0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={len(self.entries)})"

    def nnz(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def copy(self) -> "SparseMatrix":
        out = SparseMatrix(self.nrows, self.ncols)
        out.entries = dict(self.entries)
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, k), v in self.entries.items():
            for j, w in by_row.get(k, ()):
                acc[(i, j)] = acc.get((i, j), 0) + v * w
        out = SparseMatrix(self.nrows, other.ncols)
        out.entries = {key: val for key, val in acc.items() if val != 0}
        return out

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        acc = dict(self.entries)
        for key, v in other.entries.items():
            acc[key] = acc.get(key, 0) + v
        out = SparseMatrix(self.nrows, self.ncols)
        out.entries = {key: val for key, val in acc.items() if val != 0}
        return out

    def __neg__(self) -> "SparseMatrix":
        out = SparseMatrix(self.nrows, self.ncols)
        out.entries = {key: -v for key, v in self.entries.items()}
        return out

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def scale(self, c) -> "SparseMatrix":
        c = Fraction(c)
        out = SparseMatrix(self.nrows, self.ncols)
        if c != 0:
            out.entries = {key: v * c for key, v in self.entries.items()}
        return out

    def transpose(self) -> "SparseMatrix":
        out = SparseMatrix(self.ncols, self.nrows)
        out.entries = {(j, i): v for (i, j), v in self.entries.items()}
        return out

    def submatrix(self, rows: list[int], cols: list[int]) -> "SparseMatrix":
        rpos = {r: k for k, r in enumerate(rows)}
        cpos = {c: k for k, c in enumerate(cols)}
        out = SparseMatrix(len(rows), len(cols))
        out.entries = {
            (rpos[i], cpos[j]): v for (i, j), v in self.entries.items() if i in rpos and j in cpos
        }
        return out

    def to_dense(self) -> list[list[Fraction]]:
        rows = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def to_int_array(self, p: int) -> np.ndarray:
        f = Field(p)
        arr = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        for (i, j), v in self.entries.items():
            arr[i, j] = f.reduce(v)
        return arr

    def rank(self, field: Field = RATIONAL) -> int:
        return rank(self, field)


def block_matrix(row_sizes: list[int], col_sizes: list[int],
                 blocks: Mapping[tuple[int, int], SparseMatrix]) -> SparseMatrix:
    """Assemble a matrix from blocks keyed by (block_row, block_col)."""
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    coff = [0]
    for s in col_sizes:
        coff.append(coff[-1] + s)
    out = SparseMatrix(roff[-1], coff[-1])
    ent = out.entries
    for (bi, bj), blk in blocks.items():
        if blk.shape != (row_sizes[bi], col_sizes[bj]):
            raise ValueError(f"block {(bi, bj)} has shape {blk.shape}, "
                             f"expected {(row_sizes[bi], col_sizes[bj])}")
        for (i, j), v in blk.entries.items():
            key = (roff[bi] + i, coff[bj] + j)
            s = ent.get(key, 0) + v
            if s == 0:
                ent.pop(key, None)
            else:
                ent[key] = s
    return out


def _integer_rows(m: SparseMatrix) -> list[dict[int, int]]:
    rows: dict[int, dict[int, Fraction]] = {}
    for (i, j), v in m.entries.items():
        rows.setdefault(i, {})[j] = v
    out = []
    for row in rows.values():
        den = lcm(*(v.denominator for v in row.values()))
        out.append({j: int(v * den) for j, v in row.items()})
    return out


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {j: v // g for j, v in row.items()}
    return row


def rank_exact(m: SparseMatrix) -> int:
    """Fraction-free sparse elimination over the integers (rank over Q)."""
    pivots: dict[int, dict[int, int]] = {}
    for row in _integer_rows(m):
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                pivots[c] = _primitive(row)
                break
            a, b = prow[c], row[c]
            new: dict[int, int] = {}
            for j, v in row.items():
                new[j] = a * v
            for j, v in prow.items():
                s = new.get(j, 0) - b * v
                if s:
                    new[j] = s
                else:
                    new.pop(j, None)
            row = _primitive(new)
    return len(pivots)


def rank_sparse_mod_p(m: SparseMatrix, p: int) -> int:
    f = Field(p)
    rows: dict[int, dict[int, int]] = {}
    for (i, j), v in m.entries.items():
        r = f.reduce(v)
        if r:
            rows.setdefault(i, {})[j] = r
    pivots: dict[int, dict[int, int]] = {}
    for row in rows.values():
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                inv = pow(row[c], p - 2, p)
                pivots[c] = {j: v * inv % p for j, v in row.items()}
                break
            b = row[c]
            new = dict(row)
            for j, v in prow.items():
                s = (new.get(j, 0) - b * v) % p
                if s:
                    new[j] = s
                else:
                    new.pop(j, None)
            row = new
    return len(pivots)


def rank(m: SparseMatrix, field: Field = RATIONAL) -> int:
    if m.nrows == 0 or m.ncols == 0 or not m.entries:
        return 0
    if field.p is None:
        return rank_exact(m)
    return _kernels.rank_mod_p(m.to_int_array(field.p), field.p)


def nullity(m: SparseMatrix, field: Field = RATIONAL) -> int:
    return m.ncols - rank(m, field)


def format_scalar(x) -> str:
    return str(Fraction(x))
