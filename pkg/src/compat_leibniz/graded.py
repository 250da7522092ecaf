"""Shuffles, the circle product and graded bracket on g-valued cochains, and
the graded Lie algebra of tuples that encodes compatible pairs.

A cochain of cochain-degree ``p+1`` has graded degree ``p``. For
``alpha`` of degree ``p+1`` and ``beta`` of degree ``q+1``::

    (alpha o beta)(x1..x_{p+q+1}) =
        sum_{k=1}^{p+1} (-1)^{q(k-1)} sum_{s in Sh(q, p-k+1)} sgn(s)
            alpha(x1..x_{k-1}, beta(x_k, x_s(k+1)..x_s(k+q)), x_s(k+q+1)..x_s(p+q+1))

    [alpha, beta] = alpha o beta + (-1)^{pq+1} beta o alpha

With this convention ``m o m`` is minus the Leibniz defect, so
``[m, m] = 0`` exactly when ``m`` is a Leibniz bracket.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import BracketTensor, zeros
from .cochains import Cochain
from .errors import DimensionMismatch, NotMaurerCartan

__all__ = [
    "Shuffle",
    "shuffles",
    "circ",
    "nr_bracket",
    "GradedElement",
    "com_bracket",
    "psi",
    "mc_check",
    "differential_d",
]


@dataclass(frozen=True)
class Shuffle:
    p: int
    q: int
    permutation: tuple[int, ...]  # 1-based images sigma(1..p+q)
    sign: int


def _parity_sign(perm: tuple[int, ...]) -> int:
    inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def _shuffles(p: int, q: int) -> tuple[Shuffle, ...]:
    n = p + q
    out = []
    for first in itertools.combinations(range(1, n + 1), p):
        rest = tuple(i for i in range(1, n + 1) if i not in first)
        perm = first + rest
        out.append(Shuffle(p, q, perm, _parity_sign(perm)))
    return tuple(out)


def shuffles(p: int, q: int) -> list[Shuffle]:
    """All (p, q)-shuffles, lexicographic in ``sigma(1..p)``."""
    if p < 0 or q < 0:
        raise ValueError("shuffle block sizes must be nonnegative")
    return list(_shuffles(p, q))


def _as_cochain(x) -> Cochain:
    if isinstance(x, BracketTensor):
        return Cochain.from_bracket(x)
    return x


def _check_g_valued(*cs: Cochain) -> int:
    dims = set()
    for c in cs:
        if c.dim_g != c.dim_m:
            raise DimensionMismatch("graded bracket needs g-valued cochains")
        if c.degree < 1:
            raise DimensionMismatch("graded bracket needs cochains of degree >= 1")
        dims.add(c.dim_g)
    if len(dims) > 1:
        raise DimensionMismatch(f"cochains over different dimensions {sorted(dims)}")
    return dims.pop()


def circ(alpha, beta) -> Cochain:
    alpha, beta = _as_cochain(alpha), _as_cochain(beta)
    d = _check_g_valued(alpha, beta)
    p, q = alpha.degree - 1, beta.degree - 1
    N = p + q + 1
    total = zeros((d,) * N + (d,))
    if d == 0:
        return Cochain(N, d, d, total)
    A, B = alpha.coeffs, beta.coeffs
    for k in range(1, p + 2):
        T = np.tensordot(A, B, axes=([k - 1], [q + 1]))
        # T axes: u (k-1), w (p+1-k), out, v (q+1) -> reorder to u, v, w, out
        order = list(range(0, k - 1)) + list(range(p + 1, p + q + 2)) + list(range(k - 1, p)) + [p]
        composite = T.transpose(order)
        outer_sign = -1 if (q * (k - 1)) % 2 else 1
        for sh in _shuffles(q, p - k + 1):
            pi = list(range(1, k + 1)) + [k + s for s in sh.permutation]
            axes = [0] * N
            for a, t in enumerate(pi):
                axes[t - 1] = a
            term = composite.transpose(axes + [N])
            if outer_sign * sh.sign > 0:
                total = total + term
            else:
                total = total - term
    return Cochain(N, d, d, total)


def nr_bracket(alpha, beta) -> Cochain:
    alpha, beta = _as_cochain(alpha), _as_cochain(beta)
    p, q = alpha.degree - 1, beta.degree - 1
    if (p * q) % 2:
        return circ(alpha, beta) + circ(beta, alpha)
    return circ(alpha, beta) - circ(beta, alpha)


@dataclass(frozen=True, eq=False)
class GradedElement:
    """Degree-``n`` element of the tuple algebra: ``n+1`` cochains of degree ``n+1``."""

    degree: int
    components: tuple[Cochain, ...]

    def __post_init__(self):
        comps = tuple(_as_cochain(c) for c in self.components)
        if self.degree < 0 or len(comps) != self.degree + 1:
            raise DimensionMismatch(f"degree {self.degree} needs {self.degree + 1} components, got {len(comps)}")
        _check_g_valued(*comps)
        if any(c.degree != self.degree + 1 for c in comps):
            raise DimensionMismatch("every component must have cochain degree equal to degree + 1")
        object.__setattr__(self, "components", comps)

    @classmethod
    def zero(cls, degree: int, dim: int) -> "GradedElement":
        return cls(degree, tuple(Cochain.zero(degree + 1, dim, dim) for _ in range(degree + 1)))

    @property
    def dim(self) -> int:
        return self.components[0].dim_g

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other: "GradedElement") -> "GradedElement":
        return GradedElement(self.degree, tuple(a + b for a, b in zip(self.components, other.components, strict=True)))

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return GradedElement(self.degree, tuple(a - b for a, b in zip(self.components, other.components, strict=True)))

    def __mul__(self, scalar) -> "GradedElement":
        return GradedElement(self.degree, tuple(a * scalar for a in self.components))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.degree == other.degree and all(a == b for a, b in zip(self.components, other.components))

    __hash__ = None


def com_bracket(h: GradedElement, k: GradedElement) -> GradedElement:
    """Convolution bracket: component ``i`` (1-based) is ``sum_{a+b=i+1} [h_a, k_b]``."""
    if h.dim != k.dim:
        raise DimensionMismatch(f"elements over dimensions {h.dim} and {k.dim}")
    m, n = h.degree, k.degree
    comps = []
    for i in range(1, m + n + 2):
        acc = Cochain.zero(m + n + 1, h.dim, h.dim)
        for a in range(1, m + 2):
            b = i + 1 - a
            if 1 <= b <= n + 1:
                acc = acc + nr_bracket(h.components[a - 1], k.components[b - 1])
        comps.append(acc)
    return GradedElement(m + n, tuple(comps))


def psi(h: GradedElement) -> Cochain:
    """Sum of the components."""
    total = h.components[0]
    for c in h.components[1:]:
        total = total + c
    return total


def mc_check(m1, m2) -> tuple[Cochain, Cochain, Cochain]:
    """``([m1, m1], [m1, m2], [m2, m2])``."""
    m1, m2 = _as_cochain(m1), _as_cochain(m2)
    if m1.degree != 2 or m2.degree != 2:
        raise DimensionMismatch("Maurer-Cartan check needs two 2-cochains")
    return nr_bracket(m1, m1), nr_bracket(m1, m2), nr_bracket(m2, m2)


def differential_d(m1, m2, h: GradedElement) -> GradedElement:
    """``[(m1, m2), h]`` in the tuple algebra; requires ``(m1, m2)`` to be MC."""
    m1, m2 = _as_cochain(m1), _as_cochain(m2)
    labels = ("[m1,m1]", "[m1,m2]", "[m2,m2]")
    bad = [name for name, c in zip(labels, mc_check(m1, m2)) if not c.is_zero()]
    if bad:
        raise NotMaurerCartan(f"(m1, m2) is not a Maurer-Cartan element: {', '.join(bad)} nonzero")
    return com_bracket(GradedElement(1, (m1, m2)), h)
