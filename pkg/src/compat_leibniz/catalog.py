"""Built-in tables of 2- and 3-dimensional Leibniz algebras and the listed
compatible pairs, with verification at the printed (canonical) bases.

Names are ``"2D:L1"`` .. ``"2D:L3"`` and ``"3D:L1"`` .. ``"3D:L17"``.
Parametric families take ``{"alpha": value}``. Brackets not listed are zero.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from .algebra import (
    BasisChange,
    BracketTensor,
    Verdict,
    apply_basis_change,
    is_compatible_pair,
    is_leibniz,
    to_fraction,
)
from .errors import InadmissibleParameter
from .linalg import determinant, inverse

__all__ = [
    "CatalogEntry",
    "PairClaim",
    "PairVerdict",
    "ClaimResult",
    "CATALOG",
    "PAIR_CLAIMS",
    "PAIR_CLAIMS_2D",
    "PAIR_CLAIMS_3D",
    "EntryCheck",
    "DEFAULT_ALPHAS",
    "entry",
    "instantiate",
    "sample_parameters",
    "is_antisymmetric",
    "verify_catalog",
    "verify_pair_claim",
    "search_basis",
    "search_witness_basis",
    "verify_claims",
    "report_to_json",
]

DEFAULT_ALPHAS = (Fraction(-2), Fraction(0), Fraction(2), Fraction(1, 2))

# (i, j) -> {k: coefficient}; coefficients may be the string "a" (alpha) or "-a"
Table = Mapping[tuple[int, int], Mapping[int, object]]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    dim: int
    table: Table = field(repr=False)
    tags: tuple[str, ...]
    parameter: str | None = None
    admissible: Callable[[Fraction], bool] | None = field(default=None, repr=False, compare=False)
    admissible_text: str = ""

    def generate(self, params: Mapping[str, object] | None = None) -> BracketTensor:
        params = dict(params or {})
        alpha = None
        if self.parameter is None:
            if params:
                raise InadmissibleParameter(f"{self.name} takes no parameters, got {sorted(params)}")
        else:
            unknown = set(params) - {self.parameter}
            if unknown:
                raise InadmissibleParameter(f"{self.name} has no parameter(s) {sorted(unknown)}")
            if self.parameter not in params:
                raise InadmissibleParameter(f"{self.name} needs a value for {self.parameter}")
            alpha = to_fraction(params[self.parameter])
            if self.admissible is not None and not self.admissible(alpha):
                raise InadmissibleParameter(f"{self.name}: {self.parameter} = {alpha} excluded ({self.admissible_text})")
        products = {}
        for key, out in self.table.items():
            row = {}
            for k, v in out.items():
                if v == "a":
                    v = alpha
                elif v == "-a":
                    v = -alpha
                row[k] = v
            products[key] = row
        return BracketTensor.from_products(self.dim, products)

    @property
    def is_lie(self) -> bool:
        return "Lie" in self.tags


def _e(name, dim, table, tags, parameter=None, admissible=None, admissible_text=""):
    return CatalogEntry(name, dim, table, tuple(tags), parameter, admissible, admissible_text)


_ANY = ("any rational", lambda a: True)
_NONZERO = ("alpha != 0", lambda a: a != 0)
_NOT_0_1 = ("alpha not in {0, 1}", lambda a: a not in (0, 1))

_ENTRIES = [
    _e("2D:L1", 2, {(1, 2): {2: 1}, (2, 1): {2: -1}}, ("solvable", "Lie")),
    _e("2D:L2", 2, {(1, 1): {2: 1}}, ("nilpotent",)),
    _e("2D:L3", 2, {(1, 1): {2: 1}, (2, 1): {2: 1}}, ("solvable",)),
    _e("3D:L1", 3, {(1, 3): {1: "a"}, (2, 3): {1: 1, 2: 1}, (3, 3): {1: 1}}, ("solvable",),
       "alpha", _NONZERO[1], _NONZERO[0]),
    _e("3D:L2", 3, {(3, 3): {1: 1}, (2, 3): {1: 1, 2: 1}}, ("solvable",)),
    _e("3D:L3", 3, {(1, 2): {3: 1}, (1, 3): {3: -2}, (2, 1): {3: -1}, (2, 3): {3: 2},
                    (3, 1): {3: 2}, (3, 2): {3: -2}}, ("simple", "Lie")),
    _e("3D:L4", 3, {(1, 3): {1: "a"}, (2, 3): {2: -1}, (3, 2): {2: 1}, (3, 3): {1: 1}}, ("solvable",),
       "alpha", _ANY[1], _ANY[0]),
    _e("3D:L5", 3, {(1, 3): {1: 1}, (2, 3): {1: 1}, (3, 3): {1: 1}}, ("solvable",)),
    _e("3D:L6", 3, {(1, 3): {2: 1}, (3, 3): {1: 1}}, ("nilpotent",)),
    _e("3D:L7", 3, {(1, 2): {1: 1}, (1, 3): {1: 1}, (3, 2): {1: 1}, (3, 3): {1: 1}}, ("solvable",)),
    _e("3D:L8", 3, {(1, 1): {2: 1}, (2, 1): {2: 1}}, ("solvable",)),
    _e("3D:L9", 3, {(1, 2): {2: 1}, (1, 3): {3: "a"}, (2, 1): {2: -1}, (3, 1): {3: "-a"}}, ("solvable", "Lie"),
       "alpha", _NOT_0_1[1], _NOT_0_1[0]),
    _e("3D:L10", 3, {(1, 2): {2: 1}, (2, 1): {2: -1}}, ("solvable", "Lie")),
    _e("3D:L11", 3, {(1, 2): {2: 1}, (1, 3): {2: 1, 3: 1}, (2, 1): {2: -1}, (3, 1): {2: -1, 3: -1}},
       ("solvable", "Lie")),
    _e("3D:L12", 3, {(2, 2): {1: 1}, (2, 3): {1: 1}, (3, 3): {1: "a"}}, ("nilpotent",),
       "alpha", _ANY[1], _ANY[0]),
    _e("3D:L13", 3, {(2, 2): {1: 1}, (2, 3): {1: 1}, (3, 2): {1: 1}}, ("associative-commutative", "nilpotent")),
    _e("3D:L14", 3, {(1, 3): {1: 1}, (2, 3): {2: 1}, (3, 3): {1: 1}}, ("solvable",)),
    _e("3D:L15", 3, {(1, 1): {2: 1}}, ("associative-commutative", "nilpotent")),
    _e("3D:L16", 3, {(1, 2): {2: 1}, (1, 3): {3: 1}, (2, 1): {2: -1}, (3, 1): {3: -1}}, ("solvable", "Lie")),
    _e("3D:L17", 3, {(1, 2): {3: 1}, (2, 1): {3: -1}}, ("nilpotent", "Lie")),
]

CATALOG: dict[str, CatalogEntry] = {e.name: e for e in _ENTRIES}


def entry(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise InadmissibleParameter(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG)}") from None


def instantiate(name: str, params: Mapping[str, object] | None = None) -> BracketTensor:
    return entry(name).generate(params)


def sample_parameters(name: str, alphas=DEFAULT_ALPHAS) -> list[dict[str, Fraction]]:
    """Admissible parameter assignments from the sample set (``[{}]`` for rigid entries)."""
    e = entry(name)
    if e.parameter is None:
        return [{}]
    return [{e.parameter: a} for a in alphas if e.admissible is None or e.admissible(a)]


def is_antisymmetric(b: BracketTensor) -> Verdict:
    """``[e_i, e_j] + [e_j, e_i] = 0`` for all ``i <= j``; witness ``(i, j)``."""
    c = b.coeffs
    for i in range(b.dim):
        for j in range(i, b.dim):
            s = c[i, j] + c[j, i]
            if any(s):
                return Verdict(False, (i, j), s, "antisymmetry")
    return Verdict(True)


@dataclass(frozen=True)
class EntryCheck:
    name: str
    params: dict
    leibniz: Verdict
    antisymmetry: Verdict | None

    @property
    def ok(self) -> bool:
        return self.leibniz.ok and (self.antisymmetry is None or self.antisymmetry.ok)


def verify_catalog(entries: Mapping[str, CatalogEntry] | None = None, alphas=DEFAULT_ALPHAS) -> list[EntryCheck]:
    """Every entry at every sampled admissible parameter."""
    entries = CATALOG if entries is None else entries
    out = []
    for name, e in entries.items():
        for params in ([{}] if e.parameter is None else
                       [{e.parameter: a} for a in alphas if e.admissible is None or e.admissible(a)]):
            b = e.generate(params)
            out.append(EntryCheck(name, params, is_leibniz(b), is_antisymmetric(b) if e.is_lie else None))
    return out


@dataclass(frozen=True)
class PairClaim:
    left: str
    right: str
    fixed: tuple[tuple[str, Fraction], ...] = ()  # (entry name, alpha) constraints printed with the claim

    @property
    def label(self) -> str:
        def short(n):
            return n.split(":")[1]
        dim = self.left.split(":")[0]
        text = f"{dim}:({short(self.left)},{short(self.right)})"
        if self.fixed:
            text += " " + ", ".join(f"alpha={a}" for _, a in self.fixed)
        return text

    def parametric_entry(self) -> str | None:
        for n in (self.left, self.right):
            if entry(n).parameter is not None:
                return n
        return None

    def parameter_choices(self, alphas=DEFAULT_ALPHAS) -> list[dict[str, Fraction]]:
        """Parameter assignments to test, keyed by entry name."""
        n = self.parametric_entry()
        if n is None:
            return [{}]
        if self.fixed:
            return [{name: a for name, a in self.fixed}]
        e = entry(n)
        return [{n: a} for a in alphas if e.admissible is None or e.admissible(a)]


def _claim(left, right, alpha=None, on=None):
    fixed = ((f"3D:{on}", Fraction(alpha)),) if alpha is not None else ()
    return PairClaim(f"3D:{left}", f"3D:{right}", fixed)


PAIR_CLAIMS_2D = [PairClaim("2D:L2", "2D:L3")]

PAIR_CLAIMS_3D = [
    _claim("L1", "L2"), _claim("L1", "L5"), _claim("L1", "L6"), _claim("L1", "L14"),
    _claim("L2", "L5"), _claim("L2", "L6"), _claim("L2", "L14"),
    _claim("L4", "L13", -2, "L4"), _claim("L5", "L6"), _claim("L5", "L14"), _claim("L6", "L14"),
    _claim("L7", "L12", 0, "L12"),
    _claim("L8", "L15"), _claim("L9", "L10"), _claim("L9", "L11"), _claim("L9", "L16"), _claim("L9", "L17"),
    _claim("L10", "L11"), _claim("L10", "L16"),
    _claim("L11", "L16"), _claim("L11", "L17"), _claim("L12", "L13"), _claim("L16", "L17"),
]

PAIR_CLAIMS = PAIR_CLAIMS_2D + PAIR_CLAIMS_3D


def _tensors(claim: PairClaim, params: Mapping[str, object]) -> tuple[BracketTensor, BracketTensor]:
    def gen(n):
        e = entry(n)
        if e.parameter is None:
            return e.generate()
        if n not in params:
            raise InadmissibleParameter(f"{n} needs a value for {e.parameter}")
        return e.generate({e.parameter: params[n]})
    return gen(claim.left), gen(claim.right)


@dataclass(frozen=True)
class PairVerdict:
    compatible: bool
    verdict: Verdict

    @property
    def status(self) -> str:
        return "compatible-at-canonical-basis" if self.compatible else "defect-found"


def verify_pair_claim(claim: PairClaim, params: Mapping[str, object] | None = None) -> PairVerdict:
    """Exact compatibility check of the two printed tensors.

    ``params`` maps entry names to alpha values; defaults to the value
    printed with the claim. Says nothing about other bases.
    """
    if params is None:
        choices = claim.parameter_choices()
        if len(choices) != 1:
            raise InadmissibleParameter(f"{claim.label} needs an explicit parameter value")
        params = choices[0]
    b1, b2 = _tensors(claim, params)
    v = is_compatible_pair(b1, b2)
    return PairVerdict(v.ok, v)


def _int_conjugate(c: np.ndarray, P: np.ndarray, adj: np.ndarray) -> np.ndarray:
    """``det(P) * P^{-1}[P x, P y]`` in integers, with ``adj = det(P) P^{-1}``."""
    return np.einsum("ai,bj,abc,kc->ijk", P, P, c, adj)


def _int_mixed(inner: np.ndarray, outer: np.ndarray) -> np.ndarray:
    t1 = np.einsum("yzj,xjk->xyzk", inner, outer)
    t2 = np.einsum("xyj,jzk->xyzk", inner, outer)
    t3 = np.einsum("xzj,jyk->xyzk", inner, outer)
    return t1 - t2 + t3


def _adjugate(P: list[list[int]]) -> tuple[int, np.ndarray | None]:
    """``(det P, det(P) P^{-1})``; the second item is ``None`` when singular."""
    det = determinant([[Fraction(v) for v in row] for row in P])
    if det == 0:
        return 0, None
    adj = np.array(inverse([[Fraction(v) for v in row] for row in P]), dtype=object) * det
    return int(det), np.array([[int(v) for v in row] for row in adj], dtype=np.int64)


def search_basis(b1: BracketTensor, b2: BracketTensor, attempts: int, seed: int) -> BasisChange | None:
    """Random invertible integer basis changes (entries in -2..2) of the second tensor.

    Returns the identity when the printed tensors already pass, the first
    ``P`` for which ``(b1, P^{-1} b2 (P x P))`` is a compatible pair, or
    ``None``. A fast integer prefilter on ``det(P)`` times the
    conjugated tensor is confirmed by the exact rational check.
    """
    d = b1.dim
    if is_compatible_pair(b1, b2):
        return BasisChange.identity(d)
    if not is_leibniz(b1) or not is_leibniz(b2):
        return None
    rng = random.Random(seed)
    c1 = b1.coeffs
    scaled = all(v.denominator == 1 for v in list(c1.flat) + list(b2.coeffs.flat))
    c1i = np.array([[[int(v) for v in r] for r in m] for m in c1], dtype=np.int64) if scaled else None
    c2i = np.array([[[int(v) for v in r] for r in m] for m in b2.coeffs], dtype=np.int64) if scaled else None
    for _ in range(attempts):
        P = [[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)]
        det, adj = _adjugate(P)
        if det == 0:
            continue
        if scaled:
            Pi = np.array(P, dtype=np.int64)
            c2p = _int_conjugate(c2i, Pi, adj)
            if np.any(_int_mixed(c1i, c2p) + _int_mixed(c2p, c1i)):
                continue
        change = BasisChange(np.array([[Fraction(v) for v in row] for row in P], dtype=object))
        if is_compatible_pair(b1, apply_basis_change(b2, change)):
            return change
    return None


def search_witness_basis(claim: PairClaim, params: Mapping[str, object] | None = None,
                         attempts: int = 10_000, seed: int = 42) -> BasisChange | None:
    """:func:`search_basis` on the two tensors of ``claim``."""
    if params is None:
        choices = claim.parameter_choices()
        if len(choices) != 1:
            raise InadmissibleParameter(f"{claim.label} needs an explicit parameter value")
        params = choices[0]
    b1, b2 = _tensors(claim, params)
    return search_basis(b1, b2, attempts, seed)


@dataclass(frozen=True)
class ClaimResult:
    label: str
    params: dict
    status: str  # verified | witness-found | unresolved
    witness: str = ""
    basis: list | None = None


def _param_text(params: Mapping[str, Fraction]) -> str:
    return ", ".join(f"{n.split(':')[1]}: alpha={a}" for n, a in sorted(params.items()))


def verify_claims(claims=None, attempts: int = 0, seed: int = 42, alphas=DEFAULT_ALPHAS) -> list[ClaimResult]:
    """Canonical check of every claim (per sampled parameter), then the
    randomized basis search for failures when ``attempts > 0``.

    Rows are sorted by claim label, then parameter text. A failed search
    is reported as ``unresolved``, never as incompatibility.
    """
    claims = PAIR_CLAIMS if claims is None else claims
    rows = []
    for claim in claims:
        for params in claim.parameter_choices(alphas):
            b1, b2 = _tensors(claim, params)
            v = is_compatible_pair(b1, b2)
            if v.ok:
                rows.append(ClaimResult(claim.label, params, "verified"))
                continue
            found = search_basis(b1, b2, attempts, seed) if attempts > 0 else None
            if found is not None:
                basis = [[str(x) for x in row] for row in found.matrix]
                rows.append(ClaimResult(claim.label, params, "witness-found", v.describe(), basis))
            else:
                rows.append(ClaimResult(claim.label, params, "unresolved", v.describe()))
    rows.sort(key=lambda r: (_claim_sort_key(r.label), _param_text(r.params)))
    return rows


def _claim_sort_key(label: str):
    # "3D:(L10,L11) ..." sorts numerically by dimension and entry numbers
    dim, rest = label.split(":", 1)
    names = rest.split(")")[0].strip("(").split(",")
    return (int(dim[0]), [int(n[1:]) for n in names], label)


def report_to_json(rows: list[ClaimResult]) -> str:
    summary = {"verified": 0, "witness-found": 0, "unresolved": 0}
    for r in rows:
        summary[r.status] += 1
    data = {
        "claims": [
            {
                "claim": r.label,
                "params": {n: str(a) for n, a in sorted(r.params.items())},
                "status": r.status,
                "canonical_defect": r.witness,
                "basis": r.basis,
            }
            for r in rows
        ],
        "summary": summary,
    }
    return json.dumps(data, indent=2, sort_keys=True)
