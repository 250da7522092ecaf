"""Abelian extensions of a compatible pair by a compatible bimodule.

The total space is ``E = M + g`` with the module basis first, so a vector
``(m, x)`` has its ``M`` coordinates in front. Given a compatible 2-cocycle
``(f1, f2)`` the brackets are

    mu_k((m,x),(n,y)) = (r_k(m,y) + l_k(x,n) + f_k(x,y), m_k(x,y))

Linear maps are stored as matrices whose columns are the images of the
basis vectors: ``incl`` is ``(m+d) x m``, ``proj`` is ``d x (m+d)`` and
``split`` is ``(m+d) x d``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .algebra import BracketTensor, CompatiblePair, zeros
from .bimodules import CompatibleBimodule, is_compatible_bimodule
from .cochains import BimoduleActions, Cochain, CompatCochain, compat_cohomology_dim, delta_c, delta_c_matrix
from .errors import CocycleError, DimensionMismatch, InvalidBimodule, InvalidExtension

__all__ = [
    "AbelianExtension",
    "build_extension",
    "base_pair",
    "extract_cocycle",
    "induced_bimodule",
    "with_splitting",
    "equivalence_map",
    "connecting_map",
    "ext_classes_dim",
]


def _identity(n: int) -> np.ndarray:
    out = zeros((n, n))
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


@dataclass(frozen=True, eq=False)
class AbelianExtension:
    total: CompatiblePair
    incl: np.ndarray
    proj: np.ndarray
    split: np.ndarray

    @property
    def dim_m(self) -> int:
        return self.incl.shape[1]

    @property
    def dim_g(self) -> int:
        return self.proj.shape[0]

    @classmethod
    def canonical_maps(cls, dim_m: int, dim_g: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        D = dim_m + dim_g
        incl, proj, split = zeros((D, dim_m)), zeros((dim_g, D)), zeros((D, dim_g))
        incl[:dim_m, :] = _identity(dim_m)
        proj[:, dim_m:] = _identity(dim_g)
        split[dim_m:, :] = _identity(dim_g)
        return incl, proj, split


def _extension_bracket(b: BracketTensor, l: np.ndarray, r: np.ndarray, f: np.ndarray) -> BracketTensor:
    d, m = b.dim, l.shape[1]
    T = zeros((m + d, m + d, m + d))
    T[:m, m:, :m] = r
    T[m:, :m, :m] = l
    T[m:, m:, :m] = f
    T[m:, m:, m:] = b.coeffs
    return BracketTensor(T)


def build_extension(pair: CompatiblePair, cbm: CompatibleBimodule, f1: Cochain, f2: Cochain,
                    check: bool = True) -> AbelianExtension:
    """Extension defined by the compatible 2-cocycle ``(f1, f2)``.

    Raises ``CocycleError`` naming the first nonzero component of
    ``delta_c(f1, f2)`` (1-based) when the pair is not a cocycle.
    """
    d, m = pair.dim, cbm.dim_m
    for f in (f1, f2):
        if (f.degree, f.dim_g, f.dim_m) != (2, d, m):
            raise DimensionMismatch(f"cocycle components must be 2-cochains from a {d}-dimensional algebra to a {m}-dimensional module")
    if check:
        v = pair.verdict
        if not v:
            raise InvalidExtension(f"base pair is not compatible: {v.describe()}")
        v = is_compatible_bimodule(pair, cbm)
        if not v:
            raise InvalidBimodule(f"not a compatible bimodule: {v.describe()}")
        image = delta_c(pair, cbm.actions1, cbm.actions2, CompatCochain(2, (f1, f2)))
        for i, c in enumerate(image.components, start=1):
            if not c.is_zero():
                raise CocycleError(f"(f1, f2) is not a cocycle: component {i} of its differential is nonzero", i)
    total = CompatiblePair(
        _extension_bracket(pair.b1, cbm.actions1.l, cbm.actions1.r, f1.coeffs),
        _extension_bracket(pair.b2, cbm.actions2.l, cbm.actions2.r, f2.coeffs),
    )
    incl, proj, split = AbelianExtension.canonical_maps(m, d)
    return AbelianExtension(total, incl, proj, split)


def _bracket_vec(b: BracketTensor, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.einsum("i,j,ijk->k", u, v, b.coeffs)


def _validate(ext: AbelianExtension) -> None:
    m, d = ext.dim_m, ext.dim_g
    D = ext.total.dim
    if ext.incl.shape != (D, m) or ext.proj.shape != (d, D) or ext.split.shape != (D, d) or D != m + d:
        raise InvalidExtension("inclusion, projection and splitting have inconsistent shapes")
    if any(ext.proj.dot(ext.incl).flat):
        raise InvalidExtension("projection after inclusion is not zero")
    if not np.all(ext.proj.dot(ext.split) == _identity(d)):
        raise InvalidExtension("the splitting is not a section of the projection")
    if linalg.rank(ext.incl) != m or linalg.rank(ext.proj) != d:
        raise InvalidExtension("inclusion is not injective or projection is not surjective")
    v = ext.total.verdict
    if not v:
        raise InvalidExtension(f"total space is not a compatible pair: {v.describe()}")
    for k, b in enumerate((ext.total.b1, ext.total.b2), start=1):
        for a in range(m):
            for c in range(m):
                if any(_bracket_vec(b, ext.incl[:, a], ext.incl[:, c])):
                    raise InvalidExtension(f"bracket {k} of two module vectors is not zero")


def _preimage(ext: AbelianExtension, w: np.ndarray) -> np.ndarray:
    sol = linalg.solve(ext.incl, list(w))
    if sol is None:
        raise InvalidExtension("vector does not lie in the image of the inclusion")
    return np.array(sol, dtype=object)


def base_pair(ext: AbelianExtension) -> CompatiblePair:
    """Brackets on ``g`` read off through the splitting and projection."""
    d = ext.dim_g
    out = []
    for b in (ext.total.b1, ext.total.b2):
        T = zeros((d, d, d))
        for x in range(d):
            for y in range(d):
                T[x, y] = ext.proj.dot(_bracket_vec(b, ext.split[:, x], ext.split[:, y]))
        out.append(BracketTensor(T))
    return CompatiblePair(out[0], out[1])


def induced_bimodule(ext: AbelianExtension) -> CompatibleBimodule:
    """``l_k(x,m) = mu_k(s x, i m)`` and ``r_k(m,x) = mu_k(i m, s x)``, pulled back to ``M``."""
    _validate(ext)
    m, d = ext.dim_m, ext.dim_g
    acts = []
    for b in (ext.total.b1, ext.total.b2):
        L, R = zeros((d, m, m)), zeros((m, d, m))
        for x in range(d):
            for a in range(m):
                L[x, a] = _preimage(ext, _bracket_vec(b, ext.split[:, x], ext.incl[:, a]))
                R[a, x] = _preimage(ext, _bracket_vec(b, ext.incl[:, a], ext.split[:, x]))
        acts.append(BimoduleActions(L, R))
    return CompatibleBimodule(acts[0], acts[1])


def extract_cocycle(ext: AbelianExtension) -> tuple[Cochain, Cochain]:
    """``f_k(x,y) = i^{-1}(mu_k(s x, s y) - s(m_k(x,y)))``; verified to be a cocycle."""
    _validate(ext)
    m, d = ext.dim_m, ext.dim_g
    base = base_pair(ext)
    fs = []
    for b, bg in ((ext.total.b1, base.b1), (ext.total.b2, base.b2)):
        F = zeros((d, d, m))
        for x in range(d):
            for y in range(d):
                w = _bracket_vec(b, ext.split[:, x], ext.split[:, y]) - ext.split.dot(bg.coeffs[x, y])
                F[x, y] = _preimage(ext, w)
        fs.append(Cochain(2, d, m, F))
    cbm = induced_bimodule(ext)
    image = delta_c(base, cbm.actions1, cbm.actions2, CompatCochain(2, tuple(fs)))
    if not image.is_zero():
        raise InvalidExtension("extracted cochain is not a cocycle")
    return fs[0], fs[1]


def with_splitting(ext: AbelianExtension, g: Cochain) -> AbelianExtension:
    """Same extension with splitting ``s'(x) = s(x) + i(g(x))``."""
    if (g.degree, g.dim_g, g.dim_m) != (1, ext.dim_g, ext.dim_m):
        raise DimensionMismatch("g must be a linear map from the algebra to the module")
    # g.coeffs[x, a] is the coefficient of f_a in g(e_x); as a matrix with image columns it is its transpose
    return AbelianExtension(ext.total, ext.incl, ext.proj, ext.split + ext.incl.dot(g.coeffs.T))


def _phi_matrix(ext_a: AbelianExtension, ext_b: AbelianExtension, g: Cochain) -> np.ndarray:
    """``phi(i_A(m) + s_A(x)) = i_B(m + g(x)) + s_B(x)`` as a matrix."""
    src = np.concatenate([ext_a.incl, ext_a.split], axis=1)
    dst = np.concatenate([ext_b.incl, ext_b.incl.dot(g.coeffs.T) + ext_b.split], axis=1)
    inv = np.array(linalg.inverse(src), dtype=object)
    return dst.dot(inv)


def equivalence_map(ext_a: AbelianExtension, ext_b: AbelianExtension, g: Cochain) -> bool:
    """Whether ``(m, x) -> (m + g(x), x)`` is a morphism of compatible pairs intertwining ``i`` and ``j``."""
    if (ext_a.dim_m, ext_a.dim_g) != (ext_b.dim_m, ext_b.dim_g):
        raise DimensionMismatch("extensions of different shapes")
    if (g.degree, g.dim_g, g.dim_m) != (1, ext_a.dim_g, ext_a.dim_m):
        raise DimensionMismatch("g must be a linear map from the algebra to the module")
    phi = _phi_matrix(ext_a, ext_b, g)
    if not np.all(phi.dot(ext_a.incl) == ext_b.incl):
        return False
    if not np.all(ext_b.proj.dot(phi) == ext_a.proj):
        return False
    for ba, bb in ((ext_a.total.b1, ext_b.total.b1), (ext_a.total.b2, ext_b.total.b2)):
        # phi(mu_A(u, v)) = mu_B(phi u, phi v) on basis vectors
        lhs = np.einsum("uvk,ak->uva", ba.coeffs, phi)
        rhs = np.einsum("pu,qv,pqa->uva", phi, phi, bb.coeffs)
        if not np.all(lhs == rhs):
            return False
    return True


def connecting_map(pair: CompatiblePair, cbm: CompatibleBimodule,
                   fa: tuple[Cochain, Cochain], fb: tuple[Cochain, Cochain]) -> Cochain | None:
    """A 1-cochain ``g`` with ``fa - fb = delta_c g``, or ``None`` when the classes differ."""
    d, m = pair.dim, cbm.dim_m
    diff = CompatCochain(2, (fa[0] - fb[0], fa[1] - fb[1]))
    sol = linalg.solve(delta_c_matrix(pair, cbm.actions1, cbm.actions2, 1), diff.flat())
    if sol is None:
        return None
    return Cochain.from_flat(1, d, m, sol)


def ext_classes_dim(pair: CompatiblePair, cbm: CompatibleBimodule) -> int:
    """Dimension of the space of equivalence classes, which is ``dim H^2_com(g, M)``."""
    return compat_cohomology_dim(pair, cbm.actions1, cbm.actions2, 2)
