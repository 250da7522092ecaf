"""Brackets given by structure constants, and the identities they must satisfy.

A bracket on a ``d``-dimensional space is a ``d x d x d`` array ``c`` with
``c[i, j, k]`` the coefficient of ``e_k`` in ``[e_i, e_j]``. Indices are
0-based in Python and 1-based in files and printed output.

The Leibniz identity used throughout is the right one::

    [x, [y, z]] = [[x, y], z] - [[x, z], y]
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from . import linalg
from .errors import DimensionMismatch, SingularMatrixError

__all__ = [
    "to_fraction",
    "fraction_array",
    "vector",
    "basis_vector",
    "format_vector",
    "BracketTensor",
    "CompatiblePair",
    "BasisChange",
    "Verdict",
    "evaluate",
    "leibniz_defect",
    "leibniz_defect_tensor",
    "is_leibniz",
    "compat_defect",
    "compat_defect_tensor",
    "is_compatible_pair",
    "linear_combination",
    "apply_basis_change",
    "first_nonzero",
]


def to_fraction(value) -> Fraction:
    """Parse an exact scalar: int, Fraction, or a string like ``"-3/4"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floating point scalars are not accepted")
    return Fraction(value)


_to_fraction_vec = np.frompyfunc(to_fraction, 1, 1)


def fraction_array(data, shape: tuple[int, ...] | None = None) -> np.ndarray:
    """Object array of Fractions, optionally reshaped."""
    if shape is not None and np.size(data) == 0:
        return np.empty(shape, dtype=object)
    arr = np.asarray(data, dtype=object)
    if arr.size:
        arr = _to_fraction_vec(arr).astype(object)
    if shape is not None:
        arr = arr.reshape(shape)
    return arr


def zeros(shape: tuple[int, ...]) -> np.ndarray:
    arr = np.empty(shape, dtype=object)
    arr.fill(Fraction(0))
    return arr


def vector(entries: Iterable) -> np.ndarray:
    return fraction_array(list(entries))


def basis_vector(dim: int, i: int) -> np.ndarray:
    v = zeros((dim,))
    v[i] = Fraction(1)
    return v


def format_vector(v, prefix: str = "e") -> str:
    """``[0, 1, -1/2]`` -> ``"e2 - 1/2*e3"``; the zero vector prints as ``0``."""
    parts = []
    for i, c in enumerate(v):
        c = Fraction(c)
        if not c:
            continue
        name = f"{prefix}{i + 1}"
        mag = abs(c)
        term = name if mag == 1 else f"{mag}*{name}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(("+ " if c > 0 else "- ") + term)
    return " ".join(parts) if parts else "0"


def first_nonzero(arr: np.ndarray) -> tuple[int, ...] | None:
    """Lexicographically first index of a nonzero entry, or None."""
    flat = arr.reshape(-1)
    for pos, v in enumerate(flat):
        if v:
            return tuple(int(i) for i in np.unravel_index(pos, arr.shape))
    return None


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class BracketTensor:
    """Structure constants of a bilinear product."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        arr = fraction_array(coeffs)
        if arr.ndim != 3 or not (arr.shape[0] == arr.shape[1] == arr.shape[2]):
            raise DimensionMismatch(f"bracket tensor must be d x d x d, got shape {arr.shape}")
        self.coeffs = _freeze(arr)

    @classmethod
    def zero(cls, dim: int) -> "BracketTensor":
        return cls(zeros((dim, dim, dim)))

    @classmethod
    def from_products(cls, dim: int, products: Mapping[tuple[int, int], Mapping[int, object]]) -> "BracketTensor":
        """Build from 1-based products, ``{(1, 3): {2: 1}}`` meaning ``[e1, e3] = e2``."""
        c = zeros((dim, dim, dim))
        for (i, j), image in products.items():
            for k, v in image.items():
                c[i - 1, j - 1, k - 1] += to_fraction(v)
        return cls(c)

    @classmethod
    def from_entries(cls, dim: int, entries: Iterable[tuple[int, int, int, object]]) -> "BracketTensor":
        """Build from 1-based ``(i, j, k, value)`` entries; repeats accumulate."""
        c = zeros((dim, dim, dim))
        for i, j, k, v in entries:
            c[i - 1, j - 1, k - 1] += to_fraction(v)
        return cls(c)

    def entries(self) -> list[tuple[int, int, int, Fraction]]:
        """Nonzero entries, 1-based, in lexicographic order."""
        d = self.dim
        return [
            (i + 1, j + 1, k + 1, self.coeffs[i, j, k])
            for i in range(d) for j in range(d) for k in range(d)
            if self.coeffs[i, j, k]
        ]

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    def is_zero(self) -> bool:
        return not any(self.coeffs.flat)

    def __call__(self, x, y):
        return evaluate(self, x, y)

    def __eq__(self, other):
        if not isinstance(other, BracketTensor):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(np.all(self.coeffs == other.coeffs))

    def __hash__(self):
        return hash((self.dim, tuple(self.entries())))

    def __add__(self, other: "BracketTensor") -> "BracketTensor":
        _check_same_dim(self, other)
        return BracketTensor(self.coeffs + other.coeffs)

    def __sub__(self, other: "BracketTensor") -> "BracketTensor":
        _check_same_dim(self, other)
        return BracketTensor(self.coeffs - other.coeffs)

    def __neg__(self) -> "BracketTensor":
        return BracketTensor(-self.coeffs)

    def __mul__(self, scalar) -> "BracketTensor":
        return BracketTensor(self.coeffs * to_fraction(scalar))

    __rmul__ = __mul__

    def __repr__(self):
        body = ", ".join(f"[e{i},e{j}]+={v}*e{k}" for i, j, k, v in self.entries())
        return f"BracketTensor(dim={self.dim}{', ' if body else ''}{body})"


def _check_same_dim(*tensors: BracketTensor) -> None:
    dims = {t.dim for t in tensors}
    if len(dims) > 1:
        raise DimensionMismatch(f"bracket dimensions differ: {sorted(dims)}")


def _check_vectors(b: BracketTensor, *vs) -> list[np.ndarray]:
    out = []
    for v in vs:
        v = fraction_array(v)
        if v.shape != (b.dim,):
            raise DimensionMismatch(f"vector of shape {v.shape} for a bracket of dimension {b.dim}")
        out.append(v)
    return out


def evaluate(b: BracketTensor, x, y) -> np.ndarray:
    x, y = _check_vectors(b, x, y)
    if b.dim == 0:
        return zeros((0,))
    return np.einsum("i,j,ijk->k", x, y, b.coeffs)


def _mixed(inner: np.ndarray, outer: np.ndarray) -> np.ndarray:
    """``outer(x, inner(y,z)) - outer(inner(x,y), z) + outer(inner(x,z), y)``
    over all basis triples, shape ``(d, d, d, d)``."""
    if inner.shape[0] == 0:
        return zeros((0, 0, 0, 0))
    left = np.einsum("yzw,xwk->xyzk", inner, outer)
    right = np.einsum("xyw,wzk->xyzk", inner, outer)
    return left - right + right.transpose(0, 2, 1, 3)


def leibniz_defect(b: BracketTensor, x, y, z) -> np.ndarray:
    """``[x,[y,z]] - [[x,y],z] + [[x,z],y]``; zero iff the identity holds."""
    x, y, z = _check_vectors(b, x, y, z)
    return evaluate(b, x, evaluate(b, y, z)) - evaluate(b, evaluate(b, x, y), z) + evaluate(b, evaluate(b, x, z), y)


def leibniz_defect_tensor(b: BracketTensor) -> np.ndarray:
    return _mixed(b.coeffs, b.coeffs)


def compat_defect(b1: BracketTensor, b2: BracketTensor, x, y, z) -> np.ndarray:
    """Mixed identity of a pair: zero iff ``b1 + b2`` satisfies the Leibniz
    identity on ``(x, y, z)`` given that each does separately."""
    _check_same_dim(b1, b2)
    x, y, z = _check_vectors(b1, x, y, z)
    e1, e2 = (lambda u, v: evaluate(b1, u, v)), (lambda u, v: evaluate(b2, u, v))
    return (
        e2(x, e1(y, z)) + e1(x, e2(y, z))
        - e2(e1(x, y), z) - e1(e2(x, y), z)
        + e2(e1(x, z), y) + e1(e2(x, z), y)
    )


def compat_defect_tensor(b1: BracketTensor, b2: BracketTensor) -> np.ndarray:
    _check_same_dim(b1, b2)
    return _mixed(b1.coeffs, b2.coeffs) + _mixed(b2.coeffs, b1.coeffs)


@dataclass(frozen=True, eq=False)
class Verdict:
    """Outcome of an exhaustive identity check.

    ``witness`` is the first failing index tuple (0-based) and ``defect``
    the offending value there; both are None on success.
    """

    ok: bool
    witness: tuple[int, ...] | None = None
    defect: np.ndarray | None = None
    reason: str = ""
    # per-argument basis letters, e.g. ("e", "f", "e") when the middle slot is a module vector
    labels: tuple[str, ...] | None = None
    defect_label: str = "e"

    def __bool__(self) -> bool:
        return self.ok

    def describe(self, prefix: str = "e") -> str:
        if self.ok:
            return "PASS"
        labels = self.labels or (prefix,) * len(self.witness)
        args = ",".join(f"{p}{i + 1}" for p, i in zip(labels, self.witness))
        what = f" ({self.reason})" if self.reason else ""
        return f"FAIL{what}: witness ({args}), defect {format_vector(self.defect, self.defect_label)}"


def _verdict_from_tensor(t: np.ndarray, reason: str = "") -> Verdict:
    pos = first_nonzero(t)
    if pos is None:
        return Verdict(True)
    witness = pos[:-1]
    return Verdict(False, witness, t[witness].copy(), reason)


def is_leibniz(b: BracketTensor) -> Verdict:
    return _verdict_from_tensor(leibniz_defect_tensor(b), "Leibniz identity")


def is_compatible_pair(b1: BracketTensor, b2: BracketTensor) -> Verdict:
    _check_same_dim(b1, b2)
    for name, b in (("first bracket not Leibniz", b1), ("second bracket not Leibniz", b2)):
        v = _verdict_from_tensor(leibniz_defect_tensor(b), name)
        if not v:
            return v
    return _verdict_from_tensor(compat_defect_tensor(b1, b2), "compatibility")


def linear_combination(l1, b1: BracketTensor, l2, b2: BracketTensor) -> BracketTensor:
    _check_same_dim(b1, b2)
    return BracketTensor(b1.coeffs * to_fraction(l1) + b2.coeffs * to_fraction(l2))


@dataclass(frozen=True)
class CompatiblePair:
    """Two brackets on one space. Validity is computed lazily, never assumed."""

    b1: BracketTensor
    b2: BracketTensor

    def __post_init__(self):
        _check_same_dim(self.b1, self.b2)

    @property
    def dim(self) -> int:
        return self.b1.dim

    @cached_property
    def verdict(self) -> Verdict:
        return is_compatible_pair(self.b1, self.b2)

    @property
    def is_valid(self) -> bool:
        return self.verdict.ok

    def swapped(self) -> "CompatiblePair":
        return CompatiblePair(self.b2, self.b1)

    @classmethod
    def abelian(cls, dim: int) -> "CompatiblePair":
        z = BracketTensor.zero(dim)
        return cls(z, z)


@dataclass(frozen=True, eq=False)
class BasisChange:
    """Invertible matrix ``P``; column ``i`` is the image of ``e_i``."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = fraction_array(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"basis change must be square, got shape {m.shape}")
        if linalg.determinant(m.tolist()) == 0:
            raise SingularMatrixError("basis change matrix is singular")
        object.__setattr__(self, "matrix", _freeze(m))

    @classmethod
    def identity(cls, dim: int) -> "BasisChange":
        m = zeros((dim, dim))
        for i in range(dim):
            m[i, i] = Fraction(1)
        return cls(m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def inverse(self) -> "BasisChange":
        return BasisChange(fraction_array(linalg.inverse(self.matrix.tolist())))

    def __eq__(self, other):
        if not isinstance(other, BasisChange):
            return NotImplemented
        return self.matrix.shape == other.matrix.shape and bool(np.all(self.matrix == other.matrix))


def apply_basis_change(b: BracketTensor, P: BasisChange) -> BracketTensor:
    """Bracket ``[x, y]' = P^{-1} [P x, P y]``."""
    if P.dim != b.dim:
        raise DimensionMismatch(f"basis change of size {P.dim} for dimension {b.dim}")
    if b.dim == 0:
        return b
    Pinv = P.inverse().matrix
    return BracketTensor(np.einsum("ai,bj,abc,kc->ijk", P.matrix, P.matrix, b.coeffs, Pinv))
