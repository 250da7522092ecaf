"""Exact dense/sparse linear algebra over the rationals.

Everything here is fraction-free: rows are scaled to primitive integer
vectors before elimination and kept primitive after every update, so the
only divisions are exact gcd divisions. Pivots are taken as the first
nonzero row in the first unprocessed column; no size heuristics.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ExactMatrix",
    "rank",
    "kernel_basis",
    "solve",
    "determinant",
    "inverse",
]


class ExactMatrix:
    """Row-major rational matrix stored as sparse rows.

    Each row is a ``dict`` mapping column index to a nonzero ``Fraction``.
    Instances are treated as immutable.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Sequence[dict[int, Fraction]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative shape")
        self.rows = rows
        self.cols = cols
        if data is None:
            data = [{} for _ in range(rows)]
        if len(data) != rows:
            raise ValueError(f"expected {rows} rows, got {len(data)}")
        clean = []
        for r in data:
            row = {}
            for c, v in r.items():
                if not 0 <= c < cols:
                    raise IndexError(f"column {c} out of range for {cols} columns")
                v = Fraction(v)
                if v:
                    row[c] = v
            clean.append(row)
        self._data = clean

    @classmethod
    def from_dense(cls, entries) -> "ExactMatrix":
        arr = list(list(r) for r in entries)
        nrows = len(arr)
        ncols = len(arr[0]) if nrows else 0
        if any(len(r) != ncols for r in arr):
            raise ValueError("ragged matrix")
        return cls(nrows, ncols, [{j: v for j, v in enumerate(r) if v} for r in arr])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "ExactMatrix":
        data: list[dict[int, Fraction]] = [{} for _ in range(nrows)]
        for j, col in enumerate(columns):
            if len(col) != nrows:
                raise ValueError("column length does not match row count")
            for i, v in enumerate(col):
                if v:
                    data[i][j] = v
        return cls(nrows, len(columns), data)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, [{i: Fraction(1)} for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def row(self, i: int) -> dict[int, Fraction]:
        return dict(self._data[i])

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for i, r in enumerate(self._data):
            for j, v in r.items():
                out[i][j] = v
        return out

    def transpose(self) -> "ExactMatrix":
        data: list[dict[int, Fraction]] = [{} for _ in range(self.cols)]
        for i, r in enumerate(self._data):
            for j, v in r.items():
                data[j][i] = v
        return ExactMatrix(self.cols, self.rows, data)

    T = property(transpose)

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if other.rows != self.rows:
            raise ValueError("row counts differ")
        data = []
        for a, b in zip(self._data, other._data):
            r = dict(a)
            r.update({self.cols + j: v for j, v in b.items()})
            data.append(r)
        return ExactMatrix(self.rows, self.cols + other.cols, data)

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if other.cols != self.cols:
            raise ValueError("column counts differ")
        return ExactMatrix(self.rows + other.rows, self.cols, self._data + other._data)

    def matvec(self, v: Sequence) -> list[Fraction]:
        if len(v) != self.cols:
            raise ValueError(f"vector length {len(v)} != {self.cols} columns")
        return [sum((a * v[j] for j, a in r.items()), Fraction(0)) for r in self._data]

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            data = []
            for r in self._data:
                acc: dict[int, Fraction] = {}
                for k, a in r.items():
                    for j, b in other._data[k].items():
                        acc[j] = acc.get(j, 0) + a * b
                data.append(acc)
            return ExactMatrix(self.rows, other.cols, data)
        return self.matvec(other)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols}, nnz={sum(map(len, self._data))})"


def _as_matrix(A) -> ExactMatrix:
    if isinstance(A, ExactMatrix):
        return A
    if isinstance(A, np.ndarray):
        if A.ndim != 2:
            raise ValueError("expected a 2-d array")
        return ExactMatrix.from_dense(A.tolist())
    return ExactMatrix.from_dense(A)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = reduce(gcd, row.values(), 0)
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


def _integer_row(row: dict[int, Fraction]) -> dict[int, int]:
    if not row:
        return {}
    den = reduce(lcm, (Fraction(v).denominator for v in row.values()), 1)
    return _primitive({c: int(Fraction(v) * den) for c, v in row.items()})


def _eliminate(rows: list[dict[int, int]], ncols: int) -> tuple[list[tuple[int, dict[int, int]]], list[dict[int, int]]]:
    """Fraction-free Gauss-Jordan elimination on integer sparse rows.

    Returns ``(pivots, leftover)``: pivots is a list of ``(column, row)``
    in column order, each row primitive with a positive pivot entry and
    zeros in every other pivot column. ``leftover`` holds the nonzero
    rows that never became pivots; they are zero on columns < ncols.
    """
    remaining = [r for r in rows if r]
    pivots: list[tuple[int, dict[int, int]]] = []
    for c in range(ncols):
        idx = next((i for i, r in enumerate(remaining) if c in r), None)
        if idx is None:
            continue
        prow = remaining.pop(idx)
        p = prow[c]
        if p < 0:
            prow = {k: -v for k, v in prow.items()}
            p = -p

        def reduce_row(r: dict[int, int]) -> dict[int, int]:
            a = r[c]
            g = gcd(p, a)
            sp, sa = p // g, a // g
            out = {k: sp * v for k, v in r.items()}
            for k, v in prow.items():
                nv = out.get(k, 0) - sa * v
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
            return _primitive(out)

        new_remaining = []
        for r in remaining:
            if c in r:
                r = reduce_row(r)
                if not r:
                    continue
            new_remaining.append(r)
        remaining = new_remaining
        pivots = [(pc, reduce_row(pr) if c in pr else pr) for pc, pr in pivots]
        pivots.append((c, prow))
    return pivots, remaining


def _prepared(A: ExactMatrix) -> list[dict[int, int]]:
    return [_integer_row(A.row(i)) for i in range(A.rows)]


def rank(A) -> int:
    """Exact rank."""
    A = _as_matrix(A)
    pivots, _ = _eliminate(_prepared(A), A.cols)
    return len(pivots)


def kernel_basis(A) -> list[list[Fraction]]:
    """Basis of the right null space, one vector per free column.

    The vector for free column ``f`` has a 1 in position ``f`` and zeros
    in every other free position.
    """
    A = _as_matrix(A)
    pivots, _ = _eliminate(_prepared(A), A.cols)
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for f in range(A.cols):
        if f in pivot_cols:
            continue
        v = [Fraction(0)] * A.cols
        v[f] = Fraction(1)
        for c, row in pivots:
            if f in row:
                v[c] = Fraction(-row[f], row[c])
        basis.append(v)
    return basis


def solve(A, b: Sequence) -> list[Fraction] | None:
    """Particular solution of ``A x = b`` or ``None`` when inconsistent.

    Free variables are set to zero.
    """
    A = _as_matrix(A)
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {A.rows} rows")
    rows = []
    for i in range(A.rows):
        r = A.row(i)
        if b[i]:
            r[A.cols] = Fraction(b[i])
        rows.append(_integer_row(r))
    pivots, leftover = _eliminate(rows, A.cols)
    if any(leftover):
        return None
    x = [Fraction(0)] * A.cols
    for c, row in pivots:
        x[c] = Fraction(row.get(A.cols, 0), row[c])
    return x


def determinant(A) -> Fraction:
    """Determinant by Bareiss elimination on the denominator-cleared matrix."""
    A = _as_matrix(A)
    n = A.rows
    if A.cols != n:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    dense = A.to_dense()
    scale = Fraction(1)
    M = []
    for r in dense:
        den = reduce(lcm, (v.denominator for v in r), 1)
        scale /= den
        M.append([int(v * den) for v in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] * scale


def inverse(A) -> list[list[Fraction]]:
    """Exact inverse; raises ``ZeroDivisionError`` for singular input."""
    A = _as_matrix(A)
    n = A.rows
    if A.cols != n:
        raise ValueError("inverse of a non-square matrix")
    aug = A.hstack(ExactMatrix.identity(n))
    pivots, _ = _eliminate(_prepared(aug), n)
    if len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    out = [[Fraction(0)] * n for _ in range(n)]
    for c, row in pivots:
        for j in range(n):
            v = row.get(n + j, 0)
            if v:
                out[c][j] = Fraction(v, row[c])
    return out


def vectors_to_columns(vectors: Iterable[Sequence], nrows: int) -> ExactMatrix:
    return ExactMatrix.from_columns([list(v) for v in vectors], nrows)
