"""Leibniz cochains, the coboundary, and the compatible complex.

An ``n``-cochain with values in ``M`` is stored as an object array of
shape ``(d,)*n + (m,)``: ``coeffs[i1, ..., in, k]`` is the coefficient of
``f_k`` in ``f(e_i1, ..., e_in)``. Flattening in C order gives the
lexicographic enumeration used for every matrix in this module.

The coboundary is

    (dF)(x1..x_{n+1}) = l(x1, F(x2..)) + sum_{i>=2} (-1)^i r(F(..^xi..), xi)
                        + sum_{i<j} (-1)^{j+1} F(.., [xi, xj], .., ^xj, ..)

and at degree 0 it is ``(dm)(x) = l(x, m)``, the same formula with no
terms beyond the first. See ``README.md`` for why the right action does
not appear at degree 0.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .algebra import BracketTensor, CompatiblePair, _freeze, fraction_array, to_fraction, zeros
from .errors import DegreeTooLarge, DimensionMismatch, NotInC0Com
from .linalg import ExactMatrix

__all__ = [
    "BimoduleActions",
    "Cochain",
    "CompatCochain",
    "max_degree",
    "delta",
    "delta_matrix",
    "delta_c",
    "delta_c_matrix",
    "c0_com_basis",
    "cohomology_dim",
    "compat_cohomology_dim",
    "anticommute_check",
]

DEFAULT_MAX_DEGREE = 5


def max_degree() -> int:
    raw = os.environ.get("COMPAT_LEIBNIZ_MAX_DEGREE")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_DEGREE
    return int(raw)


def _check_degree(n: int) -> None:
    if n < 0:
        raise ValueError(f"negative degree {n}")
    cap = max_degree()
    if n > cap:
        raise DegreeTooLarge(
            f"degree {n} exceeds the cap {cap}; set COMPAT_LEIBNIZ_MAX_DEGREE to raise it"
        )


@dataclass(frozen=True, eq=False)
class BimoduleActions:
    """Left action ``l[i, j, k]``: coefficient of ``f_k`` in ``l(e_i, f_j)``;
    right action ``r[i, j, k]``: coefficient of ``f_k`` in ``r(f_i, e_j)``."""

    l: np.ndarray = field(repr=False)
    r: np.ndarray = field(repr=False)

    def __post_init__(self):
        l, r = fraction_array(self.l), fraction_array(self.r)
        if l.ndim != 3 or r.ndim != 3:
            raise DimensionMismatch("actions must be 3-index arrays")
        d, m, m2 = l.shape
        if m != m2 or r.shape != (m, d, m):
            raise DimensionMismatch(f"incompatible action shapes {l.shape} and {r.shape}")
        object.__setattr__(self, "l", _freeze(l))
        object.__setattr__(self, "r", _freeze(r))

    @property
    def dim_g(self) -> int:
        return self.l.shape[0]

    @property
    def dim_m(self) -> int:
        return self.l.shape[1]

    @classmethod
    def adjoint(cls, b: BracketTensor) -> "BimoduleActions":
        return cls(b.coeffs, b.coeffs)

    @classmethod
    def trivial(cls, dim_g: int, dim_m: int) -> "BimoduleActions":
        return cls(zeros((dim_g, dim_m, dim_m)), zeros((dim_m, dim_g, dim_m)))

    def __eq__(self, other):
        if not isinstance(other, BimoduleActions):
            return NotImplemented
        return (
            self.l.shape == other.l.shape and self.r.shape == other.r.shape
            and bool(np.all(self.l == other.l)) and bool(np.all(self.r == other.r))
        )

    def __add__(self, other: "BimoduleActions") -> "BimoduleActions":
        return BimoduleActions(self.l + other.l, self.r + other.r)


@dataclass(frozen=True, eq=False)
class Cochain:
    degree: int
    dim_g: int
    dim_m: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        shape = (self.dim_g,) * self.degree + (self.dim_m,)
        arr = fraction_array(self.coeffs)
        if arr.size == 0 and int(np.prod(shape)) == 0:
            arr = np.empty(shape, dtype=object)
        if arr.shape != shape:
            try:
                arr = arr.reshape(shape)
            except ValueError:
                raise DimensionMismatch(f"cochain coefficients of shape {arr.shape}, expected {shape}") from None
        object.__setattr__(self, "coeffs", _freeze(arr))

    @classmethod
    def zero(cls, degree: int, dim_g: int, dim_m: int) -> "Cochain":
        return cls(degree, dim_g, dim_m, zeros((dim_g,) * degree + (dim_m,)))

    @classmethod
    def basis(cls, degree: int, dim_g: int, dim_m: int, position: int) -> "Cochain":
        arr = zeros((dim_g ** degree * dim_m,))
        arr[position] = Fraction(1)
        return cls(degree, dim_g, dim_m, arr)

    @classmethod
    def from_flat(cls, degree: int, dim_g: int, dim_m: int, values: Sequence) -> "Cochain":
        return cls(degree, dim_g, dim_m, fraction_array(list(values)))

    @classmethod
    def from_bracket(cls, b: BracketTensor) -> "Cochain":
        return cls(2, b.dim, b.dim, b.coeffs)

    @classmethod
    def identity(cls, dim: int) -> "Cochain":
        arr = zeros((dim, dim))
        for i in range(dim):
            arr[i, i] = Fraction(1)
        return cls(1, dim, dim, arr)

    @classmethod
    def from_entries(cls, degree: int, dim_g: int, dim_m: int, entries) -> "Cochain":
        """1-based ``(i1, .., in, k, value)`` entries; repeats accumulate."""
        arr = zeros((dim_g,) * degree + (dim_m,))
        for e in entries:
            *idx, v = e
            if len(idx) != degree + 1:
                raise DimensionMismatch(f"entry {e} does not have {degree + 1} indices")
            arr[tuple(i - 1 for i in idx)] += to_fraction(v)
        return cls(degree, dim_g, dim_m, arr)

    @property
    def size(self) -> int:
        return self.coeffs.size

    def flat(self) -> list[Fraction]:
        return list(self.coeffs.reshape(-1))

    def entries(self) -> list[tuple]:
        """Nonzero entries, 1-based, lexicographic."""
        out = []
        for idx in itertools.product(*(range(s) for s in self.coeffs.shape)):
            v = self.coeffs[idx]
            if v:
                out.append(tuple(i + 1 for i in idx) + (v,))
        return out

    def to_bracket(self) -> BracketTensor:
        if self.degree != 2 or self.dim_g != self.dim_m:
            raise DimensionMismatch("only g-valued 2-cochains are brackets")
        return BracketTensor(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs.flat)

    def _same(self, other: "Cochain") -> None:
        if (self.degree, self.dim_g, self.dim_m) != (other.degree, other.dim_g, other.dim_m):
            raise DimensionMismatch(
                f"cochains of type {(self.degree, self.dim_g, self.dim_m)} and "
                f"{(other.degree, other.dim_g, other.dim_m)}"
            )

    def __add__(self, other: "Cochain") -> "Cochain":
        self._same(other)
        return Cochain(self.degree, self.dim_g, self.dim_m, self.coeffs + other.coeffs)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._same(other)
        return Cochain(self.degree, self.dim_g, self.dim_m, self.coeffs - other.coeffs)

    def __neg__(self) -> "Cochain":
        return Cochain(self.degree, self.dim_g, self.dim_m, -self.coeffs)

    def __mul__(self, scalar) -> "Cochain":
        return Cochain(self.degree, self.dim_g, self.dim_m, self.coeffs * Fraction(scalar))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (
            (self.degree, self.dim_g, self.dim_m) == (other.degree, other.dim_g, other.dim_m)
            and bool(np.all(self.coeffs == other.coeffs))
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class CompatCochain:
    """Element of the compatible cochain space.

    Degree ``n >= 1`` holds ``n`` cochains of degree ``n``; degree 0 holds a
    single degree-0 cochain (an element of ``M``).
    """

    degree: int
    components: tuple[Cochain, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        expected = max(self.degree, 1)
        if len(comps) != expected:
            raise DimensionMismatch(f"degree {self.degree} needs {expected} components, got {len(comps)}")
        kinds = {(c.degree, c.dim_g, c.dim_m) for c in comps}
        if len(kinds) != 1 or next(iter(kinds))[0] != self.degree:
            raise DimensionMismatch(f"component types {sorted(kinds)} do not match degree {self.degree}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def zero(cls, degree: int, dim_g: int, dim_m: int) -> "CompatCochain":
        return cls(degree, tuple(Cochain.zero(degree, dim_g, dim_m) for _ in range(max(degree, 1))))

    @classmethod
    def from_flat(cls, degree: int, dim_g: int, dim_m: int, values: Sequence) -> "CompatCochain":
        size = dim_g ** degree * dim_m
        k = max(degree, 1)
        if len(values) != k * size:
            raise DimensionMismatch(f"expected {k * size} values, got {len(values)}")
        return cls(degree, tuple(
            Cochain.from_flat(degree, dim_g, dim_m, values[i * size:(i + 1) * size]) for i in range(k)
        ))

    @property
    def dim_g(self) -> int:
        return self.components[0].dim_g

    @property
    def dim_m(self) -> int:
        return self.components[0].dim_m

    def flat(self) -> list[Fraction]:
        return [v for c in self.components for v in c.flat()]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __getitem__(self, i: int) -> Cochain:
        return self.components[i]

    def __len__(self) -> int:
        return len(self.components)

    def __add__(self, other: "CompatCochain") -> "CompatCochain":
        return CompatCochain(self.degree, tuple(a + b for a, b in zip(self.components, other.components, strict=True)))

    def __sub__(self, other: "CompatCochain") -> "CompatCochain":
        return CompatCochain(self.degree, tuple(a - b for a, b in zip(self.components, other.components, strict=True)))

    def __neg__(self) -> "CompatCochain":
        return CompatCochain(self.degree, tuple(-a for a in self.components))

    def __mul__(self, scalar) -> "CompatCochain":
        return CompatCochain(self.degree, tuple(a * scalar for a in self.components))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, CompatCochain):
            return NotImplemented
        return self.degree == other.degree and all(a == b for a, b in zip(self.components, other.components))

    __hash__ = None


def _check_data(b: BracketTensor, acts: BimoduleActions, f: Cochain | None = None) -> None:
    if acts.dim_g != b.dim:
        raise DimensionMismatch(f"actions over a {acts.dim_g}-dimensional algebra, bracket has dimension {b.dim}")
    if f is not None and (f.dim_g != b.dim or f.dim_m != acts.dim_m):
        raise DimensionMismatch(
            f"cochain on ({f.dim_g}, {f.dim_m}) with algebra dimension {b.dim} and module dimension {acts.dim_m}"
        )


def delta(b: BracketTensor, acts: BimoduleActions, f: Cochain) -> Cochain:
    """Coboundary of ``f``, evaluated with whole-array contractions."""
    _check_data(b, acts, f)
    n, d, m = f.degree, f.dim_g, f.dim_m
    F, L, R, C = f.coeffs, acts.l, acts.r, b.coeffs
    shape = (d,) * (n + 1) + (m,)
    if d == 0 or m == 0:
        return Cochain.zero(n + 1, d, m)
    if n == 0:
        return Cochain(1, d, m, np.einsum("alk,l->ak", L, F))
    out = np.moveaxis(np.tensordot(L, F, axes=([1], [n])), 1, -1)
    RF = np.tensordot(F, R, axes=([n], [0]))  # (x1..xn, b, k)
    for i in range(2, n + 2):
        term = np.moveaxis(RF, n, i - 1)
        out = out + term if i % 2 == 0 else out - term
    for i in range(1, n + 1):
        T = np.tensordot(F, C, axes=([i - 1], [2]))
        for j in range(i + 1, n + 2):
            perm = (
                list(range(0, i - 1)) + [n] + list(range(i - 1, j - 2))
                + [n + 1] + list(range(j - 2, n - 1)) + [n - 1]
            )
            term = np.transpose(T, perm)
            out = out + term if (j + 1) % 2 == 0 else out - term
    assert out.shape == shape
    return Cochain(n + 1, d, m, out)


def _nonzeros(arr: np.ndarray, key_axis: int) -> dict[int, list[tuple]]:
    """Group the nonzero entries of a 3-index array by one index."""
    out: dict[int, list[tuple]] = {}
    for idx in zip(*np.nonzero(arr != 0)):
        idx = tuple(int(i) for i in idx)
        rest = idx[:key_axis] + idx[key_axis + 1:]
        out.setdefault(idx[key_axis], []).append(rest + (arr[idx],))
    return out


def _ravel(idx: tuple[int, ...], k: int, d: int, m: int) -> int:
    pos = 0
    for i in idx:
        pos = pos * d + i
    return pos * m + k


def delta_matrix(b: BracketTensor, acts: BimoduleActions, n: int) -> ExactMatrix:
    """Matrix of the coboundary on n-cochains, one column per basis cochain.

    Columns are built by pushing each basis cochain forward through the
    three kinds of terms, so cost is proportional to the structure
    constants' support rather than the full cochain size.
    """
    _check_data(b, acts)
    d, m = b.dim, acts.dim_m
    ncols, nrows = d ** n * m, d ** (n + 1) * m
    rows: list[dict[int, Fraction]] = [{} for _ in range(nrows)]
    left = _nonzeros(acts.l, 1)     # l[a, l, k] keyed by l -> (a, k, v)
    right = _nonzeros(acts.r, 0)    # r[l, b, k] keyed by l -> (b, k, v)
    brk = _nonzeros(b.coeffs, 2)    # c[a, b, c] keyed by c -> (a, b, v)

    def add(idx, k, col, v):
        row = rows[_ravel(idx, k, d, m)]
        nv = row.get(col, 0) + v
        if nv:
            row[col] = nv
        else:
            row.pop(col, None)

    col = 0
    for t in itertools.product(range(d), repeat=n):
        for lm in range(m):
            for a, k, v in left.get(lm, ()):
                add((a,) + t, k, col, v)
            if n >= 1:
                for i in range(2, n + 2):
                    s = 1 if i % 2 == 0 else -1
                    for bb, k, v in right.get(lm, ()):
                        add(t[:i - 1] + (bb,) + t[i - 1:], k, col, s * v)
                for i in range(1, n + 1):
                    for a, bb, v in brk.get(t[i - 1], ()):
                        for j in range(i + 1, n + 2):
                            s = 1 if (j + 1) % 2 == 0 else -1
                            add(t[:i - 1] + (a,) + t[i:j - 1] + (bb,) + t[j - 1:], lm, col, s * v)
            col += 1
    return ExactMatrix(nrows, ncols, rows)


def _check_pair_data(pair: CompatiblePair, acts1: BimoduleActions, acts2: BimoduleActions) -> None:
    _check_data(pair.b1, acts1)
    _check_data(pair.b2, acts2)
    if acts1.dim_m != acts2.dim_m:
        raise DimensionMismatch("the two actions live on modules of different dimension")


def delta_c(pair: CompatiblePair, acts1: BimoduleActions, acts2: BimoduleActions, h: CompatCochain) -> CompatCochain:
    """Differential of the compatible complex.

    Degree 0 requires ``h`` to satisfy ``d1 h = d2 h`` and maps it to that
    common value; otherwise ``NotInC0Com`` is raised.
    """
    _check_pair_data(pair, acts1, acts2)
    n = h.degree
    if n == 0:
        m0 = h.components[0]
        d1, d2 = delta(pair.b1, acts1, m0), delta(pair.b2, acts2, m0)
        if d1 != d2:
            raise NotInC0Com("degree-0 element is not a compatible 0-cochain: d1 m != d2 m")
        return CompatCochain(1, (d1,))
    d1 = [delta(pair.b1, acts1, c) for c in h.components]
    d2 = [delta(pair.b2, acts2, c) for c in h.components]
    comps = []
    for i in range(n + 1):
        if i == 0:
            comps.append(d1[0])
        elif i == n:
            comps.append(d2[n - 1])
        else:
            comps.append(d1[i] + d2[i - 1])
    return CompatCochain(n + 1, tuple(comps))


def _block_matrix(blocks: dict[tuple[int, int], ExactMatrix], nbr: int, nbc: int, br: int, bc: int) -> ExactMatrix:
    rows: list[dict[int, Fraction]] = [{} for _ in range(nbr * br)]
    for (I, J), M in blocks.items():
        for i in range(M.rows):
            target = rows[I * br + i]
            for j, v in M.row(i).items():
                target[J * bc + j] = target.get(J * bc + j, 0) + v
    return ExactMatrix(nbr * br, nbc * bc, rows)


def delta_c_matrix(pair: CompatiblePair, acts1: BimoduleActions, acts2: BimoduleActions, n: int) -> ExactMatrix:
    """Matrix of the compatible differential from ``n`` to ``n+1`` for ``n >= 1``.

    Input blocks are the ``n`` components in order, output blocks the
    ``n+1`` components: block ``(i, i)`` is ``d1``, block ``(i, i-1)`` is
    ``d2``.
    """
    if n < 1:
        raise ValueError("degree-0 differential lives on the subspace from c0_com_basis")
    _check_pair_data(pair, acts1, acts2)
    D1 = delta_matrix(pair.b1, acts1, n)
    D2 = delta_matrix(pair.b2, acts2, n)
    blocks = {}
    for i in range(n):
        blocks[(i, i)] = D1
        blocks[(i + 1, i)] = D2
    return _block_matrix(blocks, n + 1, n, D1.rows, D1.cols)


def _c0_condition(pair, acts1, acts2) -> ExactMatrix:
    D1 = delta_matrix(pair.b1, acts1, 0).to_dense()
    D2 = delta_matrix(pair.b2, acts2, 0).to_dense()
    return ExactMatrix.from_dense([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(D1, D2)]) if D1 else ExactMatrix(0, acts1.dim_m)


def c0_com_basis(pair: CompatiblePair, acts1: BimoduleActions, acts2: BimoduleActions) -> list[np.ndarray]:
    """Basis of the compatible 0-cochains ``{m : d1 m = d2 m}``."""
    _check_pair_data(pair, acts1, acts2)
    return [fraction_array(v) for v in linalg.kernel_basis(_c0_condition(pair, acts1, acts2))]


def _rank_t(A: ExactMatrix) -> int:
    # eliminate along the shorter side
    return linalg.rank(A.transpose() if A.cols < A.rows else A)


def cohomology_dim(b: BracketTensor, acts: BimoduleActions, n: int) -> int:
    """Dimension of ``HL^n(g; M)``."""
    _check_degree(n)
    _check_data(b, acts)
    dim_c = b.dim ** n * acts.dim_m
    r_out = _rank_t(delta_matrix(b, acts, n))
    r_in = _rank_t(delta_matrix(b, acts, n - 1)) if n >= 1 else 0
    return dim_c - r_out - r_in


def _c0_image_rank(pair, acts1, acts2) -> tuple[int, int]:
    basis = c0_com_basis(pair, acts1, acts2)
    if not basis:
        return 0, 0
    D1 = delta_matrix(pair.b1, acts1, 0)
    image = [D1.matvec(list(v)) for v in basis]
    return len(basis), linalg.rank(image)


def compat_cohomology_dim(pair: CompatiblePair, acts1: BimoduleActions, acts2: BimoduleActions, n: int) -> int:
    """Dimension of ``H^n_com(g, M)``."""
    _check_degree(n)
    _check_pair_data(pair, acts1, acts2)
    if n == 0:
        dim0, r0 = _c0_image_rank(pair, acts1, acts2)
        return dim0 - r0
    dim_c = n * pair.dim ** n * acts1.dim_m
    r_out = _rank_t(delta_c_matrix(pair, acts1, acts2, n))
    if n == 1:
        r_in = _c0_image_rank(pair, acts1, acts2)[1]
    else:
        r_in = _rank_t(delta_c_matrix(pair, acts1, acts2, n - 1))
    return dim_c - r_out - r_in


def anticommute_check(pair: CompatiblePair, acts1: BimoduleActions, acts2: BimoduleActions, f: Cochain) -> Cochain:
    """``d1 d2 f + d2 d1 f``; identically zero for compatible data."""
    _check_pair_data(pair, acts1, acts2)
    b1, b2 = pair.b1, pair.b2
    return (
        delta(b1, acts1, delta(b2, acts2, f))
        + delta(b2, acts2, delta(b1, acts1, f))
    )
