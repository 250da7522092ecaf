"""Bimodules over a Leibniz algebra, compatible bimodules, and the semidirect product.

Every identity below is the Leibniz (or mixed compatibility) identity on
``g + M`` with exactly one argument taken from ``M``. Writing the defect
of ``[a,[b,c]] = [[a,b],c] - [[a,c],b]`` with the module vector in slot 1,
2 or 3 gives

    slot 1:  r(m,[x,y]) - r(r(m,x),y) + r(r(m,y),x)
    slot 2:  l(x,r(m,y)) - r(l(x,m),y) + l([x,y],m)
    slot 3:  l(x,l(y,m)) - l([x,y],m) + r(l(x,m),y)

The compatibility conditions of a compatible bimodule are the sums of
the two mixed versions (inner structure 1 / outer 2, and the reverse);
they are labelled (a) for slot 3, (b) for slot 2 and (c) for slot 1.
The printed form of (a) writes ``r_1(x, l_2(y,m))`` where only ``l_1``
type-checks, and the printed form of (b) repeats ``r_1(l_2(x,m),y)``
instead of adding ``r_2(l_1(x,m),y)``. The default is the symmetric
reading; ``literal_b=True`` checks (b) exactly as printed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import BracketTensor, CompatiblePair, Verdict, first_nonzero, zeros
from .cochains import BimoduleActions
from .errors import DimensionMismatch, InvalidBimodule

__all__ = [
    "CompatibleBimodule",
    "bimodule_defects",
    "is_bimodule",
    "compat_bimodule_defects",
    "is_compatible_bimodule",
    "semidirect",
]

_SLOT_LABELS = {
    1: ("f", "e", "e"),
    2: ("e", "f", "e"),
    3: ("e", "e", "f"),
}


def _slot_defects(inner: tuple, outer: tuple) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Mixed defects with inner structure ``inner`` and outer ``outer``.

    Each structure is ``(C, L, R)``. Results are indexed ``[m,x,y,k]``,
    ``[x,m,y,k]`` and ``[x,y,m,k]``.
    """
    Ci, Li, Ri = inner
    Co, Lo, Ro = outer
    es = np.einsum
    s1 = es("xyc,mck->mxyk", Ci, Ro) - es("mxn,nyk->mxyk", Ri, Ro) + es("myn,nxk->mxyk", Ri, Ro)
    s2 = es("myn,xnk->xmyk", Ri, Lo) - es("xmn,nyk->xmyk", Li, Ro) + es("xyc,cmk->xmyk", Ci, Lo)
    s3 = es("ymn,xnk->xymk", Li, Lo) - es("xyc,cmk->xymk", Ci, Lo) + es("xmn,nyk->xymk", Li, Ro)
    return s1, s2, s3


def _check(b: BracketTensor, acts: BimoduleActions) -> None:
    if acts.dim_g != b.dim:
        raise DimensionMismatch(f"actions over a {acts.dim_g}-dimensional algebra, bracket has dimension {b.dim}")


def bimodule_defects(b: BracketTensor, acts: BimoduleActions) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three representation defects, module vector in slot 1, 2, 3."""
    _check(b, acts)
    s = (b.coeffs, acts.l, acts.r)
    return _slot_defects(s, s)


def _first_failure(tensors, names, slots) -> Verdict:
    for t, name, slot in zip(tensors, names, slots):
        pos = first_nonzero(t)
        if pos is not None:
            w = pos[:-1]
            return Verdict(False, w, t[w].copy(), name, _SLOT_LABELS[slot], "f")
    return Verdict(True)


def is_bimodule(b: BracketTensor, acts: BimoduleActions, name: str = "") -> Verdict:
    """Check the three representation identities on all basis triples.

    The witness lists the arguments in their slot order; module basis
    vectors are printed as ``f``.
    """
    prefix = f"{name}: " if name else ""
    names = [prefix + f"representation identity, module in slot {i}" for i in (1, 2, 3)]
    return _first_failure(bimodule_defects(b, acts), names, (1, 2, 3))


@dataclass(frozen=True)
class CompatibleBimodule:
    actions1: BimoduleActions
    actions2: BimoduleActions

    def __post_init__(self):
        a, b = self.actions1, self.actions2
        if (a.dim_g, a.dim_m) != (b.dim_g, b.dim_m):
            raise DimensionMismatch("the two actions have different dimensions")

    @property
    def dim_g(self) -> int:
        return self.actions1.dim_g

    @property
    def dim_m(self) -> int:
        return self.actions1.dim_m

    @classmethod
    def adjoint(cls, pair: CompatiblePair) -> "CompatibleBimodule":
        return cls(BimoduleActions.adjoint(pair.b1), BimoduleActions.adjoint(pair.b2))

    @classmethod
    def trivial(cls, dim_g: int, dim_m: int) -> "CompatibleBimodule":
        t = BimoduleActions.trivial(dim_g, dim_m)
        return cls(t, t)

    def swapped(self) -> "CompatibleBimodule":
        return CompatibleBimodule(self.actions2, self.actions1)

    __hash__ = None


def compat_bimodule_defects(pair: CompatiblePair, cbm: CompatibleBimodule, literal_b: bool = False):
    """Defects of conditions (a), (b), (c), indexed like the slot defects."""
    _check(pair.b1, cbm.actions1)
    _check(pair.b2, cbm.actions2)
    one = (pair.b1.coeffs, cbm.actions1.l, cbm.actions1.r)
    two = (pair.b2.coeffs, cbm.actions2.l, cbm.actions2.r)
    c12 = _slot_defects(one, two)
    c21 = _slot_defects(two, one)
    cond_c = c12[0] + c21[0]
    cond_b = c12[1] + c21[1]
    cond_a = c12[2] + c21[2]
    if literal_b:
        # as printed: the term r_2(l_1(x,m),y) is replaced by a second r_1(l_2(x,m),y)
        L1, R1 = cbm.actions1.l, cbm.actions1.r
        L2, R2 = cbm.actions2.l, cbm.actions2.r
        cond_b = cond_b + np.einsum("xmn,nyk->xmyk", L1, R2) - np.einsum("xmn,nyk->xmyk", L2, R1)
    return cond_a, cond_b, cond_c


def is_compatible_bimodule(pair: CompatiblePair, cbm: CompatibleBimodule, literal_b: bool = False) -> Verdict:
    """Both bimodule structures, then conditions (a), (b), (c) in that order."""
    for i, (b, acts) in enumerate(((pair.b1, cbm.actions1), (pair.b2, cbm.actions2)), start=1):
        v = is_bimodule(b, acts, name=f"structure {i}")
        if not v:
            return v
    a, bb, c = compat_bimodule_defects(pair, cbm, literal_b)
    names = ["compatibility condition (a)", "compatibility condition (b)", "compatibility condition (c)"]
    return _first_failure((a, bb, c), names, (3, 2, 1))


def _semidirect_bracket(b: BracketTensor, acts: BimoduleActions) -> BracketTensor:
    d, m = b.dim, acts.dim_m
    T = zeros((d + m, d + m, d + m))
    T[:d, :d, :d] = b.coeffs
    T[:d, d:, d:] = acts.l
    T[d:, :d, d:] = acts.r
    return BracketTensor(T)


def semidirect(pair: CompatiblePair, cbm: CompatibleBimodule, check: bool = True) -> CompatiblePair:
    """Compatible pair on ``g + M`` with the algebra basis first.

    ``[(x,m),(y,n)]^k = ([x,y]_k, l_k(x,n) + r_k(m,y))``. With ``check``
    the inputs are validated first and ``InvalidBimodule`` is raised on
    failure.
    """
    if check:
        v = pair.verdict
        if not v:
            raise InvalidBimodule(f"base pair is not compatible: {v.describe()}")
        v = is_compatible_bimodule(pair, cbm)
        if not v:
            raise InvalidBimodule(f"not a compatible bimodule: {v.describe()}")
    return CompatiblePair(
        _semidirect_bracket(pair.b1, cbm.actions1),
        _semidirect_bracket(pair.b2, cbm.actions2),
    )
