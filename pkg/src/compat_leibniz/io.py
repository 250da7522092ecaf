"""JSON file formats. Scalars are written as integers when integral and as
``"p/q"`` strings otherwise; both forms are accepted on input, floats are not.
Indices are 1-based and only nonzero entries are written.

* algebra: ``{"dim": d, "brackets": [B1, B2?]}``, each ``B`` a list of ``[i, j, k, c]``
* cochain: ``{"degree": n, "dimG": d, "dimM": m, "entries": [[i1, .., in, k, c], ..]}``
* compatible cochain: ``{"degree": n, "dimG": d, "dimM": m, "components": [entries, ..]}``
  with ``n`` components (one for ``n = 0``)
* bimodule: ``{"dimM": m, "l1": entries, "r1": entries, "l2": entries, "r2": entries}``;
  ``l`` entries are ``[x, a, b, c]`` (``l(e_x, f_a)`` has ``c`` on ``f_b``), ``r`` entries ``[a, x, b, c]``
* deformation: ``{"algebra": PATH-or-object, "order": N, "terms1": {"1": entries, ..}, "terms2": {..}}``
* gauge: ``{"order": N, "phi": {"1": [[i, k, c], ..], ..}}``, ``phi_i(e_i)`` has ``c`` on ``e_k``
* extension: ``{"dimM": m, "dimG": d, "algebra": algebra, "inclusion": rows,
  "projection": rows, "splitting": rows}``; matrices are row lists whose
  columns are images of basis vectors, and may be omitted for the canonical maps
"""
from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Any

import numpy as np

from .algebra import BracketTensor, CompatiblePair, zeros
from .bimodules import CompatibleBimodule
from .cochains import BimoduleActions, Cochain, CompatCochain
from .deformation import GaugeTransform, TruncatedDeformation
from .errors import FormatError
from .extensions import AbelianExtension

__all__ = [
    "scalar_to_json",
    "scalar_from_json",
    "dumps",
    "load_json",
    "algebra_to_json",
    "algebra_from_json",
    "pair_from_json",
    "cochain_to_json",
    "cochain_from_json",
    "compat_cochain_to_json",
    "compat_cochain_from_json",
    "bimodule_to_json",
    "bimodule_from_json",
    "deformation_to_json",
    "deformation_from_json",
    "gauge_to_json",
    "gauge_from_json",
    "extension_to_json",
    "extension_from_json",
    "read",
]


def scalar_to_json(v) -> int | str:
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def scalar_from_json(v, where: str) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float) or not isinstance(v, (int, str)):
        raise FormatError(f"scalar must be an integer or a \"p/q\" string, got {v!r}", where)
    try:
        return Fraction(v.strip()) if isinstance(v, str) else Fraction(v)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"cannot parse scalar {v!r}", where) from None


def _format(data: Any, level: int) -> str:
    pad, inner = "  " * level, "  " * (level + 1)
    if isinstance(data, dict):
        if not data:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_format(v, level + 1)}" for k, v in data.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(data, list) and any(isinstance(v, (dict, list)) for v in data):
        return "[\n" + ",\n".join(inner + _format(v, level + 1) for v in data) + "\n" + pad + "]"
    return json.dumps(data)


def dumps(data: Any) -> str:
    """Indented JSON with lists of scalars (entries, matrix rows) kept on one line."""
    return _format(data, 0) + "\n"


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read file: {exc.strerror}", path) from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})", path) from None


def _field(obj, key: str, where: str):
    if not isinstance(obj, dict):
        raise FormatError("expected a JSON object", where)
    if key not in obj:
        raise FormatError(f"missing field {key!r}", where)
    return obj[key]


def _nonneg_int(v, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise FormatError(f"expected a nonnegative integer, got {v!r}", where)
    return v


def _entries_to_json(entries) -> list:
    return [[int(i) for i in e[:-1]] + [scalar_to_json(e[-1])] for e in entries]


def _entries_from_json(data, bounds: tuple[int, ...], where: str) -> list[tuple]:
    """Validate ``[i1, .., ik, c]`` lists against 1-based index bounds."""
    if not isinstance(data, list):
        raise FormatError("entries must be a list", where)
    out = []
    for n, e in enumerate(data):
        loc = f"{where}[{n}]"
        if not isinstance(e, list) or len(e) != len(bounds) + 1:
            raise FormatError(f"entry must have {len(bounds)} indices and a value", loc)
        idx = []
        for pos, (i, top) in enumerate(zip(e[:-1], bounds)):
            if isinstance(i, bool) or not isinstance(i, int) or not 1 <= i <= top:
                raise FormatError(f"index {i!r} outside 1..{top}", f"{loc}[{pos}]")
            idx.append(i)
        out.append(tuple(idx) + (scalar_from_json(e[-1], f"{loc}[{len(bounds)}]"),))
    return out


def _array_entries(arr: np.ndarray) -> list:
    out = []
    for idx in np.ndindex(*arr.shape):
        v = arr[idx]
        if v:
            out.append([i + 1 for i in idx] + [scalar_to_json(v)])
    return out


def _array_from_entries(data, shape: tuple[int, ...], where: str) -> np.ndarray:
    arr = zeros(shape)
    for e in _entries_from_json(data, shape, where):
        arr[tuple(i - 1 for i in e[:-1])] += e[-1]
    return arr


# algebras

def algebra_to_json(obj: BracketTensor | CompatiblePair) -> dict:
    tensors = [obj] if isinstance(obj, BracketTensor) else [obj.b1, obj.b2]
    return {"dim": tensors[0].dim, "brackets": [_entries_to_json(b.entries()) for b in tensors]}


def algebra_from_json(data, where: str = "algebra") -> list[BracketTensor]:
    """One or two bracket tensors."""
    d = _nonneg_int(_field(data, "dim", where), f"{where}.dim")
    brackets = _field(data, "brackets", where)
    if not isinstance(brackets, list) or not 1 <= len(brackets) <= 2:
        raise FormatError("brackets must be a list of one or two entry lists", f"{where}.brackets")
    return [BracketTensor(_array_from_entries(b, (d, d, d), f"{where}.brackets[{n}]"))
            for n, b in enumerate(brackets)]


def pair_from_json(data, where: str = "algebra") -> CompatiblePair:
    bs = algebra_from_json(data, where)
    if len(bs) != 2:
        raise FormatError("a compatible pair needs two brackets", f"{where}.brackets")
    return CompatiblePair(bs[0], bs[1])


# cochains

def cochain_to_json(c: Cochain) -> dict:
    return {"degree": c.degree, "dimG": c.dim_g, "dimM": c.dim_m, "entries": _entries_to_json(c.entries())}


def _cochain_header(data, where: str) -> tuple[int, int, int]:
    n = _nonneg_int(_field(data, "degree", where), f"{where}.degree")
    d = _nonneg_int(_field(data, "dimG", where), f"{where}.dimG")
    m = _nonneg_int(_field(data, "dimM", where), f"{where}.dimM")
    return n, d, m


def cochain_from_json(data, where: str = "cochain") -> Cochain:
    n, d, m = _cochain_header(data, where)
    shape = (d,) * n + (m,)
    return Cochain(n, d, m, _array_from_entries(_field(data, "entries", where), shape, f"{where}.entries"))


def compat_cochain_to_json(h: CompatCochain) -> dict:
    return {"degree": h.degree, "dimG": h.dim_g, "dimM": h.dim_m,
            "components": [_entries_to_json(c.entries()) for c in h.components]}


def compat_cochain_from_json(data, where: str = "cochain") -> CompatCochain:
    n, d, m = _cochain_header(data, where)
    comps = _field(data, "components", where)
    want = max(n, 1)
    if not isinstance(comps, list) or len(comps) != want:
        raise FormatError(f"degree {n} needs {want} components", f"{where}.components")
    shape = (d,) * n + (m,)
    return CompatCochain(n, tuple(
        Cochain(n, d, m, _array_from_entries(c, shape, f"{where}.components[{i}]")) for i, c in enumerate(comps)
    ))


# bimodules

def bimodule_to_json(cbm: CompatibleBimodule) -> dict:
    return {
        "dimM": cbm.dim_m,
        "l1": _array_entries(cbm.actions1.l), "r1": _array_entries(cbm.actions1.r),
        "l2": _array_entries(cbm.actions2.l), "r2": _array_entries(cbm.actions2.r),
    }


def bimodule_from_json(data, dim_g: int, where: str = "bimodule") -> CompatibleBimodule:
    m = _nonneg_int(_field(data, "dimM", where), f"{where}.dimM")
    acts = []
    for k in (1, 2):
        l = _array_from_entries(_field(data, f"l{k}", where), (dim_g, m, m), f"{where}.l{k}")
        r = _array_from_entries(_field(data, f"r{k}", where), (m, dim_g, m), f"{where}.r{k}")
        acts.append(BimoduleActions(l, r))
    return CompatibleBimodule(acts[0], acts[1])


# deformations and gauges

def _terms_from_json(data, d: int, order: int, shape: tuple[int, ...], where: str) -> dict[int, np.ndarray]:
    if not isinstance(data, dict):
        raise FormatError("expected an object keyed by order", where)
    out = {}
    for key in sorted(data, key=lambda s: (len(s), s)):
        if not key.isdigit() or not 1 <= int(key) <= order:
            raise FormatError(f"order key {key!r} outside 1..{order}", where)
        out[int(key)] = _array_from_entries(data[key], shape, f"{where}.{key}")
    return out


def _terms_to_json(terms) -> dict:
    return {str(i): _array_entries(c.coeffs) for i, c in enumerate(terms, start=1) if not c.is_zero()}


def deformation_to_json(defm: TruncatedDeformation, algebra: str | dict | None = None) -> dict:
    """``algebra`` may be a path to reference instead of inlining the base pair."""
    return {
        "algebra": algebra if algebra is not None else algebra_to_json(defm.base),
        "order": defm.order,
        "terms1": _terms_to_json(defm.terms1),
        "terms2": _terms_to_json(defm.terms2),
    }


def deformation_from_json(data, base_dir: str = ".", where: str = "deformation") -> TruncatedDeformation:
    alg = _field(data, "algebra", where)
    if isinstance(alg, str):
        alg = load_json(os.path.join(base_dir, alg))
    pair = pair_from_json(alg, f"{where}.algebra")
    order = _nonneg_int(_field(data, "order", where), f"{where}.order")
    d = pair.dim
    terms = []
    for k in (1, 2):
        raw = data.get(f"terms{k}", {})
        arrs = _terms_from_json(raw, d, order, (d, d, d), f"{where}.terms{k}")
        terms.append({i: Cochain(2, d, d, a) for i, a in arrs.items()})
    return TruncatedDeformation.from_terms(pair, order, terms[0], terms[1])


def gauge_to_json(g: GaugeTransform) -> dict:
    return {"order": g.order, "phi": _terms_to_json(g.phi)}


def gauge_from_json(data, dim: int, where: str = "gauge") -> GaugeTransform:
    order = _nonneg_int(_field(data, "order", where), f"{where}.order")
    arrs = _terms_from_json(_field(data, "phi", where), dim, order, (dim, dim), f"{where}.phi")
    return GaugeTransform.from_terms(order, dim, {i: Cochain(1, dim, dim, a) for i, a in arrs.items()})


# extensions

def _matrix_to_json(a: np.ndarray) -> list:
    return [[scalar_to_json(v) for v in row] for row in a]


def _matrix_from_json(data, shape: tuple[int, int], where: str) -> np.ndarray:
    if not isinstance(data, list) or len(data) != shape[0]:
        raise FormatError(f"expected {shape[0]} rows", where)
    out = zeros(shape)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != shape[1]:
            raise FormatError(f"expected {shape[1]} columns", f"{where}[{i}]")
        for j, v in enumerate(row):
            out[i, j] = scalar_from_json(v, f"{where}[{i}][{j}]")
    return out


def extension_to_json(ext: AbelianExtension) -> dict:
    return {
        "dimM": ext.dim_m,
        "dimG": ext.dim_g,
        "algebra": algebra_to_json(ext.total),
        "inclusion": _matrix_to_json(ext.incl),
        "projection": _matrix_to_json(ext.proj),
        "splitting": _matrix_to_json(ext.split),
    }


def extension_from_json(data, where: str = "extension") -> AbelianExtension:
    m = _nonneg_int(_field(data, "dimM", where), f"{where}.dimM")
    d = _nonneg_int(_field(data, "dimG", where), f"{where}.dimG")
    total = pair_from_json(_field(data, "algebra", where), f"{where}.algebra")
    if total.dim != m + d:
        raise FormatError(f"total dimension {total.dim} is not dimM + dimG = {m + d}", f"{where}.algebra.dim")
    incl, proj, split = AbelianExtension.canonical_maps(m, d)
    if "inclusion" in data:
        incl = _matrix_from_json(data["inclusion"], (m + d, m), f"{where}.inclusion")
    if "projection" in data:
        proj = _matrix_from_json(data["projection"], (d, m + d), f"{where}.projection")
    if "splitting" in data:
        split = _matrix_from_json(data["splitting"], (m + d, d), f"{where}.splitting")
    return AbelianExtension(total, incl, proj, split)


def read(path: str, parser, *args, **kwargs):
    """Load ``path`` and parse it, prefixing format errors with the file name."""
    data = load_json(path)
    try:
        return parser(data, *args, **kwargs)
    except FormatError as exc:
        raise FormatError(str(exc), path) from None
