"""Truncated one-parameter formal deformations of a compatible pair.

A deformation of order ``N`` is ``m_{k,t} = sum_{i=0}^N m_{k,i} t^i``
(``k = 1, 2``) with ``m_{k,0}`` the base brackets, such that the
Maurer-Cartan equations hold modulo ``t^{N+1}``. Order by order:

    sum_{i+j=n} [m_{1,i}, m_{1,j}] = 0
    sum_{i+j=n} [m_{1,i}, m_{2,j}] = 0
    sum_{i+j=n} [m_{2,i}, m_{2,j}] = 0

For 2-cochains ``[m, x] = -delta x`` with adjoint coefficients, so the
order ``n+1`` equations for the new terms ``(x, y)`` read
``delta_c(x, y) = (O_1, O_12, O_2)`` where

    O_1  = 1/2 sum_{i+j=n+1, i,j>0} [m_{1,i}, m_{1,j}]
    O_12 =     sum_{i+j=n+1, i,j>0} [m_{1,i}, m_{2,j}]
    O_2  = 1/2 sum_{i+j=n+1, i,j>0} [m_{2,i}, m_{2,j}]

Gauge transformations ``Phi_t = id + sum phi_i t^i`` act by
``m'_{k,t} = Phi_t^{-1} o m_{k,t} o (Phi_t x Phi_t)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from . import linalg
from .algebra import CompatiblePair
from .cochains import BimoduleActions, Cochain, CompatCochain, delta_c, delta_c_matrix
from .errors import DimensionMismatch, InvalidDeformation, NoInfinitesimal
from .graded import nr_bracket

__all__ = [
    "TruncatedDeformation",
    "GaugeTransform",
    "ObstructionClass",
    "ResidualCheck",
    "Infinitesimal",
    "residuals",
    "is_deformation_of_order",
    "infinitesimal",
    "obstruction",
    "try_extend",
    "extend",
    "apply_gauge",
    "infinitesimals_cohomologous",
]

COMPONENTS = ("[m1,m1]", "[m1,m2]", "[m2,m2]")


def _adjoint(pair: CompatiblePair) -> tuple[BimoduleActions, BimoduleActions]:
    return BimoduleActions.adjoint(pair.b1), BimoduleActions.adjoint(pair.b2)


@dataclass(frozen=True, eq=False)
class TruncatedDeformation:
    """``terms1[i-1]`` and ``terms2[i-1]`` are ``m_{1,i}`` and ``m_{2,i}`` for ``i = 1..order``."""

    base: CompatiblePair
    order: int
    terms1: tuple[Cochain, ...]
    terms2: tuple[Cochain, ...]

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be nonnegative")
        t1, t2 = tuple(self.terms1), tuple(self.terms2)
        if len(t1) != self.order or len(t2) != self.order:
            raise DimensionMismatch(f"order {self.order} needs {self.order} terms per bracket")
        d = self.base.dim
        for c in t1 + t2:
            if (c.degree, c.dim_g, c.dim_m) != (2, d, d):
                raise DimensionMismatch(f"deformation terms must be 2-cochains on a {d}-dimensional algebra")
        object.__setattr__(self, "terms1", t1)
        object.__setattr__(self, "terms2", t2)

    @classmethod
    def from_terms(cls, base: CompatiblePair, order: int,
                   terms1: Mapping[int, Cochain] | None = None,
                   terms2: Mapping[int, Cochain] | None = None) -> "TruncatedDeformation":
        """Sparse constructor: missing orders are zero."""
        terms1, terms2 = dict(terms1 or {}), dict(terms2 or {})
        for key in list(terms1) + list(terms2):
            if not 1 <= key <= order:
                raise DimensionMismatch(f"term index {key} outside 1..{order}")
        d = base.dim
        zero = Cochain.zero(2, d, d)
        return cls(
            base, order,
            tuple(terms1.get(i, zero) for i in range(1, order + 1)),
            tuple(terms2.get(i, zero) for i in range(1, order + 1)),
        )

    @property
    def dim(self) -> int:
        return self.base.dim

    def m1(self, i: int) -> Cochain:
        return Cochain.from_bracket(self.base.b1) if i == 0 else self.terms1[i - 1]

    def m2(self, i: int) -> Cochain:
        return Cochain.from_bracket(self.base.b2) if i == 0 else self.terms2[i - 1]

    def __eq__(self, other):
        if not isinstance(other, TruncatedDeformation):
            return NotImplemented
        return (
            self.base.b1 == other.base.b1 and self.base.b2 == other.base.b2 and self.order == other.order
            and all(a == b for a, b in zip(self.terms1 + self.terms2, other.terms1 + other.terms2))
        )

    __hash__ = None


def _convolution(defm: TruncatedDeformation, n: int, positive_only: bool) -> tuple[Cochain, Cochain, Cochain]:
    d = defm.dim
    acc = [Cochain.zero(3, d, d) for _ in range(3)]
    lo = 1 if positive_only else 0
    for i in range(lo, n - lo + 1):
        j = n - i
        acc[0] = acc[0] + nr_bracket(defm.m1(i), defm.m1(j))
        acc[1] = acc[1] + nr_bracket(defm.m1(i), defm.m2(j))
        acc[2] = acc[2] + nr_bracket(defm.m2(i), defm.m2(j))
    return acc[0], acc[1], acc[2]


def residuals(defm: TruncatedDeformation, n: int) -> tuple[Cochain, Cochain, Cochain]:
    """``sum_{i+j=n}`` of the three brackets, ``0 <= i, j``."""
    if not 0 <= n <= defm.order:
        raise ValueError(f"residual order {n} outside 0..{defm.order}")
    return _convolution(defm, n, positive_only=False)


@dataclass(frozen=True)
class ResidualCheck:
    ok: bool
    n: int | None = None
    component: str | None = None
    residual: Cochain | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_deformation_of_order(defm: TruncatedDeformation) -> ResidualCheck:
    """All residuals up to the stored order vanish; otherwise the first failure."""
    for n in range(defm.order + 1):
        for name, r in zip(COMPONENTS, residuals(defm, n)):
            if not r.is_zero():
                return ResidualCheck(False, n, name, r)
    return ResidualCheck(True)


@dataclass(frozen=True)
class Infinitesimal:
    index: int
    m1: Cochain
    m2: Cochain
    is_cocycle: bool
    coboundary: CompatCochain


def infinitesimal(defm: TruncatedDeformation) -> Infinitesimal:
    """First nonzero pair ``(m_{1,n}, m_{2,n})`` with its cocycle verdict."""
    for n in range(1, defm.order + 1):
        a, b = defm.m1(n), defm.m2(n)
        if not (a.is_zero() and b.is_zero()):
            acts1, acts2 = _adjoint(defm.base)
            image = delta_c(defm.base, acts1, acts2, CompatCochain(2, (a, b)))
            return Infinitesimal(n, a, b, image.is_zero(), image)
    raise NoInfinitesimal("every deformation term is zero")


@dataclass(frozen=True)
class ObstructionClass:
    o1: Cochain
    o12: Cochain
    o2: Cochain
    is_closed: bool

    def as_cochain(self) -> CompatCochain:
        return CompatCochain(3, (self.o1, self.o12, self.o2))

    def is_zero(self) -> bool:
        return self.o1.is_zero() and self.o12.is_zero() and self.o2.is_zero()


def _require_valid(defm: TruncatedDeformation) -> None:
    check = is_deformation_of_order(defm)
    if not check:
        raise InvalidDeformation(f"not a deformation of order {defm.order}: {check.component} nonzero at order {check.n}")


def obstruction(defm: TruncatedDeformation) -> ObstructionClass:
    """Obstruction to extending an order-``n`` deformation to order ``n+1``."""
    _require_valid(defm)
    a, b, c = _convolution(defm, defm.order + 1, positive_only=True)
    half = Fraction(1, 2)
    o = CompatCochain(3, (a * half, b, c * half))
    acts1, acts2 = _adjoint(defm.base)
    closed = delta_c(defm.base, acts1, acts2, o).is_zero()
    return ObstructionClass(o[0], o[1], o[2], closed)


def extend(defm: TruncatedDeformation, x: Cochain, y: Cochain) -> TruncatedDeformation:
    return TruncatedDeformation(defm.base, defm.order + 1, defm.terms1 + (x,), defm.terms2 + (y,))


def try_extend(defm: TruncatedDeformation) -> tuple[Cochain, Cochain] | None:
    """Next-order terms solving ``delta_c(x, y) = O``, or ``None`` when none exist.

    The solution has every free variable set to zero. The extended
    deformation is re-verified before it is returned.
    """
    obs = obstruction(defm)
    acts1, acts2 = _adjoint(defm.base)
    A = delta_c_matrix(defm.base, acts1, acts2, 2)
    sol = linalg.solve(A, obs.as_cochain().flat())
    if sol is None:
        return None
    d = defm.dim
    x, y = CompatCochain.from_flat(2, d, d, sol).components
    check = is_deformation_of_order(extend(defm, x, y))
    if not check:
        raise InvalidDeformation(
            f"extension failed re-verification: {check.component} nonzero at order {check.n}"
        )
    return x, y


def _compose(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Coefficient matrix of ``f o g`` for linear maps stored as ``[input, output]``."""
    return g.dot(f)


@dataclass(frozen=True, eq=False)
class GaugeTransform:
    """``Phi_t = id + sum_{i=1}^N phi_i t^i``; ``phi[i-1]`` is ``phi_i``."""

    order: int
    phi: tuple[Cochain, ...]

    def __post_init__(self):
        phi = tuple(self.phi)
        if len(phi) != self.order:
            raise DimensionMismatch(f"order {self.order} needs {self.order} maps")
        dims = {(c.degree, c.dim_g, c.dim_m) for c in phi}
        if any(k[0] != 1 or k[1] != k[2] for k in dims) or len(dims) > 1:
            raise DimensionMismatch("gauge maps must be linear endomorphisms of one space")
        object.__setattr__(self, "phi", phi)

    @classmethod
    def identity(cls, order: int, dim: int) -> "GaugeTransform":
        return cls(order, tuple(Cochain.zero(1, dim, dim) for _ in range(order)))

    @classmethod
    def from_terms(cls, order: int, dim: int, phi: Mapping[int, Cochain]) -> "GaugeTransform":
        zero = Cochain.zero(1, dim, dim)
        return cls(order, tuple(phi.get(i, zero) for i in range(1, order + 1)))

    def series(self, dim: int) -> list[np.ndarray]:
        return [Cochain.identity(dim).coeffs] + [p.coeffs for p in self.phi]

    def inverse_series(self, dim: int) -> list[np.ndarray]:
        """``psi_0 = id``, ``psi_k = -sum_{i=1}^k phi_i o psi_{k-i}``."""
        phis = self.series(dim)
        psis = [phis[0]]
        for k in range(1, self.order + 1):
            acc = Cochain.zero(1, dim, dim).coeffs
            for i in range(1, k + 1):
                acc = acc + _compose(phis[i], psis[k - i])
            psis.append(-acc)
        return psis

    def inverse(self, dim: int) -> "GaugeTransform":
        psis = self.inverse_series(dim)
        return GaugeTransform(self.order, tuple(Cochain(1, dim, dim, p) for p in psis[1:]))


def _conjugate(series_m: list[np.ndarray], phis: list[np.ndarray], psis: list[np.ndarray], N: int) -> list[np.ndarray]:
    """Coefficients ``t^1..t^N`` of ``Psi o m o (Phi x Phi)``."""
    out = []
    for n in range(1, N + 1):
        acc = None
        for a in range(n + 1):
            for b in range(n - a + 1):
                for c in range(n - a - b + 1):
                    e = n - a - b - c
                    term = np.einsum("xu,yv,uvo,ok->xyk", phis[c], phis[e], series_m[b], psis[a])
                    acc = term if acc is None else acc + term
        out.append(acc)
    return out


def apply_gauge(defm: TruncatedDeformation, g: GaugeTransform) -> TruncatedDeformation:
    if g.order != defm.order:
        raise DimensionMismatch(f"gauge of order {g.order} applied to a deformation of order {defm.order}")
    d, N = defm.dim, defm.order
    phis, psis = g.series(d), g.inverse_series(d)
    new = []
    for m in (defm.m1, defm.m2):
        series_m = [m(i).coeffs for i in range(N + 1)]
        new.append(tuple(Cochain(2, d, d, c) for c in _conjugate(series_m, phis, psis, N)))
    return TruncatedDeformation(defm.base, N, new[0], new[1])


def _same_base(a: CompatiblePair, b: CompatiblePair) -> bool:
    return a.b1 == b.b1 and a.b2 == b.b2


def infinitesimals_cohomologous(defm_a: TruncatedDeformation, defm_b: TruncatedDeformation) -> bool:
    """Whether the infinitesimals differ by ``delta_c`` of a 1-cochain.

    Both are read at the smallest order where either deformation has a
    nonzero term; deformations with no nonzero term are trivially
    cohomologous.
    """
    if not _same_base(defm_a.base, defm_b.base):
        raise DimensionMismatch("deformations of different base pairs")
    index = None
    for n in range(1, max(defm_a.order, defm_b.order) + 1):
        if any(not t.is_zero() for D in (defm_a, defm_b) if n <= D.order for t in (D.m1(n), D.m2(n))):
            index = n
            break
    if index is None:
        return True
    d = defm_a.dim
    zero = Cochain.zero(2, d, d)

    def at(D: TruncatedDeformation) -> tuple[Cochain, Cochain]:
        return (D.m1(index), D.m2(index)) if index <= D.order else (zero, zero)

    (a1, a2), (b1, b2) = at(defm_a), at(defm_b)
    diff = CompatCochain(2, (a1 - b1, a2 - b2))
    if diff.is_zero():
        return True
    acts1, acts2 = _adjoint(defm_a.base)
    return linalg.solve(delta_c_matrix(defm_a.base, acts1, acts2, 1), diff.flat()) is not None
