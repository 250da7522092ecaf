"""Command-line front end.

Exit codes: 0 when the computation succeeds or the check passes, 1 when a
check fails (the witness is printed), 2 for usage or input errors.
Every subcommand accepts ``--json`` for machine-readable output.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

import numpy as np

from . import io
from .algebra import CompatiblePair, Verdict, format_vector, is_compatible_pair, is_leibniz
from .bimodules import CompatibleBimodule, is_compatible_bimodule
from .catalog import CATALOG, PAIR_CLAIMS, entry, report_to_json, verify_catalog, verify_claims
from .cochains import Cochain, CompatCochain, cohomology_dim, compat_cohomology_dim, delta, delta_c
from .deformation import (
    apply_gauge,
    extend,
    infinitesimal,
    is_deformation_of_order,
    obstruction,
    try_extend,
)
from .errors import InvalidDeformation, LeibnizError, NoInfinitesimal
from .extensions import base_pair, build_extension, ext_classes_dim, extract_cocycle, induced_bimodule
from .graded import mc_check

__all__ = ["main", "run", "build_parser"]

OK, FAILED, USAGE = 0, 1, 2


class _Out:
    """Collects report lines so every command writes once, deterministically."""

    def __init__(self):
        self.lines: list[str] = []

    def __call__(self, line: str = "") -> None:
        self.lines.append(line)

    def text(self) -> str:
        return "\n".join(self.lines) + ("\n" if self.lines else "")


def _first_entry(c: Cochain) -> tuple[tuple[int, ...], np.ndarray] | None:
    arr = c.coeffs
    for idx in np.ndindex(*arr.shape[:-1]):
        if any(arr[idx]):
            return idx, arr[idx]
    return None


def _args_text(idx: tuple[int, ...]) -> str:
    return "(" + ",".join(f"e{i + 1}" for i in idx) + ")"


def _cochain_failure(c: Cochain) -> dict | None:
    hit = _first_entry(c)
    if hit is None:
        return None
    idx, value = hit
    return {"arguments": [i + 1 for i in idx], "value": [io.scalar_to_json(v) for v in value],
            "text": f"{_args_text(idx)} -> {format_vector(value)}"}


def _verdict_json(v: Verdict) -> dict:
    out = {"pass": bool(v)}
    if not v:
        out["witness"] = [int(i) + 1 for i in v.witness]
        out["defect"] = [io.scalar_to_json(x) for x in v.defect]
        out["text"] = v.describe()
    return out


def _pass_fail(ok) -> str:
    return "PASS" if ok else "FAIL"


def _emit(args, out: _Out, payload) -> None:
    if args.json:
        sys.stdout.write(io.dumps(payload))
    else:
        sys.stdout.write(out.text())


def _base_dir(path: str) -> str:
    return os.path.dirname(os.path.abspath(path))


def _load_tensors(path: str):
    return io.read(path, io.algebra_from_json)


def _load_pair(path: str) -> CompatiblePair:
    return io.read(path, io.pair_from_json)


def _load_bimodule(spec: str, pair: CompatiblePair) -> CompatibleBimodule:
    if spec == "adjoint":
        return CompatibleBimodule.adjoint(pair)
    return io.read(spec, io.bimodule_from_json, pair.dim)


# check

def cmd_check(args) -> int:
    tensors = _load_tensors(args.algebra)
    out, payload, ok = _Out(), {}, True
    verdicts = [is_leibniz(b) for b in tensors]
    for n, v in enumerate(verdicts, start=1):
        label = "Leibniz" if len(tensors) == 1 else f"Leibniz (bracket {n})"
        out(f"{label}: {v.describe()}")
        payload[f"leibniz{n}"] = _verdict_json(v)
        ok = ok and bool(v)
    if args.compatible:
        if len(tensors) != 2:
            raise LeibnizError("--compatible needs an algebra file with two brackets")
        v = is_compatible_pair(tensors[0], tensors[1])
        out(f"Compatible: {v.describe()}")
        payload["compatible"] = _verdict_json(v)
        ok = ok and bool(v)
    payload["pass"] = ok
    _emit(args, out, payload)
    return OK if ok else FAILED


# mc-check

def cmd_mc_check(args) -> int:
    tensors = _load_tensors(args.algebra)
    m1 = Cochain.from_bracket(tensors[0])
    m2 = Cochain.from_bracket(tensors[1]) if len(tensors) == 2 else Cochain.zero(2, m1.dim_g, m1.dim_g)
    out, comps = _Out(), []
    for name, c in zip(("[m1,m1]", "[m1,m2]", "[m2,m2]"), mc_check(m1, m2)):
        fail = _cochain_failure(c)
        out(f"{name}: {_pass_fail(fail is None)}" + ("" if fail is None else f" first nonzero {fail['text']}"))
        comps.append({"component": name, "pass": fail is None, "first_nonzero": fail})
    ok = all(c["pass"] for c in comps)
    _emit(args, out, {"components": comps, "pass": ok})
    return OK if ok else FAILED


# cohomology

def _coefficients(args, pair: CompatiblePair) -> CompatibleBimodule:
    if args.bimodule:
        return _load_bimodule(args.bimodule, pair)
    if args.coefficients == "trivial":
        return CompatibleBimodule.trivial(pair.dim, args.module_dim)
    return CompatibleBimodule.adjoint(pair)


def cmd_cohomology(args) -> int:
    tensors = _load_tensors(args.algebra)
    b1 = tensors[0]
    b2 = tensors[1] if len(tensors) == 2 else None
    if args.compatible and b2 is None:
        raise LeibnizError("--compatible needs an algebra file with two brackets")
    pair = CompatiblePair(b1, b2 if b2 is not None else b1)
    if args.compatible:
        v = pair.verdict
        if not v:
            raise LeibnizError(f"the brackets are not a compatible pair: {v.describe()}")
    cbm = _coefficients(args, pair)
    if args.cochain:
        return _apply_coboundary(args, pair, cbm)
    if args.degree is None:
        raise LeibnizError("--degree is required unless --cochain is given")
    if args.compatible:
        dim = compat_cohomology_dim(pair, cbm.actions1, cbm.actions2, args.degree)
        label = "H^%d_com" % args.degree
    else:
        b, acts = (pair.b1, cbm.actions1) if args.bracket == 1 else (pair.b2, cbm.actions2)
        if args.bracket == 2 and b2 is None:
            raise LeibnizError("--bracket 2 needs an algebra file with two brackets")
        dim = cohomology_dim(b, acts, args.degree)
        label = "HL^%d" % args.degree
    out = _Out()
    out(str(dim))
    _emit(args, out, {"group": label, "degree": args.degree, "dimension": dim})
    return OK


def _apply_coboundary(args, pair: CompatiblePair, cbm: CompatibleBimodule) -> int:
    out = _Out()
    if args.compatible:
        h = io.read(args.cochain, io.compat_cochain_from_json)
        image = delta_c(pair, cbm.actions1, cbm.actions2, h)
        payload = io.compat_cochain_to_json(image)
        for n, c in enumerate(image.components, start=1):
            out(f"component {n}: " + (" ".join(_entry_text(e) for e in c.entries()) or "0"))
    else:
        c = io.read(args.cochain, io.cochain_from_json)
        b, acts = (pair.b1, cbm.actions1) if args.bracket == 1 else (pair.b2, cbm.actions2)
        image = delta(b, acts, c)
        payload = io.cochain_to_json(image)
        out(" ".join(_entry_text(e) for e in image.entries()) or "0")
    _emit(args, out, payload)
    return OK


def _entry_text(e) -> str:
    return "[" + ",".join(str(i) for i in e[:-1]) + f"]={io.scalar_to_json(e[-1])}"


# deform

def _load_deformation(path: str):
    return io.read(path, io.deformation_from_json, _base_dir(path))


def cmd_deform_verify(args) -> int:
    defm = _load_deformation(args.file)
    check = is_deformation_of_order(defm)
    out = _Out()
    payload = {"order": defm.order, "pass": bool(check)}
    if check:
        out(f"deformation of order {defm.order}: PASS")
        try:
            inf = infinitesimal(defm)
            out(f"infinitesimal at t^{inf.index}: " + ("2-cocycle" if inf.is_cocycle else "NOT a 2-cocycle"))
            payload["infinitesimal"] = {"index": inf.index, "cocycle": inf.is_cocycle}
        except NoInfinitesimal:
            out("infinitesimal: none (all terms zero)")
            payload["infinitesimal"] = None
    else:
        fail = _cochain_failure(check.residual)
        out(f"deformation of order {defm.order}: FAIL {check.component} nonzero at t^{check.n}, first nonzero {fail['text']}")
        payload["failure"] = {"order": check.n, "component": check.component, "first_nonzero": fail}
    _emit(args, out, payload)
    return OK if check else FAILED


def _require_deformation(defm) -> None:
    check = is_deformation_of_order(defm)
    if not check:
        raise InvalidDeformation(
            f"not a deformation of order {defm.order}: {check.component} nonzero at t^{check.n}"
        )


def cmd_deform_obstruction(args) -> int:
    defm = _load_deformation(args.file)
    try:
        _require_deformation(defm)
    except InvalidDeformation as exc:
        sys.stderr.write(f"check failed: {exc}\n")
        return FAILED
    obs = obstruction(defm)
    ext = try_extend(defm)
    out = _Out()
    names = ("O1", "O12", "O2")
    comps = []
    for name, c in zip(names, (obs.o1, obs.o12, obs.o2)):
        fail = _cochain_failure(c)
        out(f"{name}: " + ("0" if fail is None else f"nonzero, first {fail['text']}"))
        comps.append({"component": name, "zero": fail is None, "first_nonzero": fail,
                      "entries": [[int(i) for i in e[:-1]] + [io.scalar_to_json(e[-1])] for e in c.entries()]})
    out(f"closed: {'yes' if obs.is_closed else 'no'}")
    out(f"extends to order {defm.order + 1}: {'yes' if ext is not None else 'no'}")
    _emit(args, out, {"order": defm.order, "components": comps, "closed": obs.is_closed,
                      "extendable": ext is not None})
    return OK


def cmd_deform_extend(args) -> int:
    defm = _load_deformation(args.file)
    try:
        _require_deformation(defm)
    except InvalidDeformation as exc:
        sys.stderr.write(f"check failed: {exc}\n")
        return FAILED
    sol = try_extend(defm)
    out = _Out()
    if sol is None:
        out(f"not extendable: the obstruction class at order {defm.order + 1} is nonzero")
        _emit(args, out, {"extendable": False, "order": defm.order})
        return FAILED
    new = extend(defm, *sol)
    _write(args.output, io.deformation_to_json(new))
    out(f"extended to order {new.order}; written to {args.output}")
    _emit(args, out, {"extendable": True, "order": new.order, "output": args.output})
    return OK


def cmd_deform_gauge(args) -> int:
    defm = _load_deformation(args.file)
    g = io.read(args.phi, io.gauge_from_json, defm.dim)
    new = apply_gauge(defm, g)
    data = io.deformation_to_json(new)
    if args.output:
        _write(args.output, data)
        out = _Out()
        out(f"gauge-transformed deformation of order {new.order}; written to {args.output}")
        _emit(args, out, {"order": new.order, "output": args.output})
    else:
        sys.stdout.write(io.dumps(data))
    return OK


# ext

def cmd_ext_build(args) -> int:
    pair = _load_pair(args.algebra)
    cbm = _load_bimodule(args.bimodule, pair)
    h = io.read(args.cocycle, io.compat_cochain_from_json)
    if h.degree != 2:
        raise LeibnizError("the cocycle file must hold a degree-2 compatible cochain")
    ext = build_extension(pair, cbm, h.components[0], h.components[1])
    _write(args.output, io.extension_to_json(ext))
    out = _Out()
    out(f"extension of dimension {ext.total.dim} (module {ext.dim_m}, algebra {ext.dim_g}); written to {args.output}")
    _emit(args, out, {"dim": ext.total.dim, "dimM": ext.dim_m, "dimG": ext.dim_g, "output": args.output})
    return OK


def cmd_ext_extract(args) -> int:
    ext = io.read(args.file, io.extension_from_json)
    f1, f2 = extract_cocycle(ext)
    base = base_pair(ext)
    cbm = induced_bimodule(ext)
    cocycle = io.compat_cochain_to_json(CompatCochain(2, (f1, f2)))
    out = _Out()
    out("base:")
    for n, b in enumerate((base.b1, base.b2), start=1):
        out(f"  bracket {n}: " + (" ".join(_entry_text(e) for e in b.entries()) or "0"))
    out("cocycle:")
    for n, f in enumerate((f1, f2), start=1):
        out(f"  f{n}: " + (" ".join(_entry_text(e) for e in f.entries()) or "0"))
    _emit(args, out, {"algebra": io.algebra_to_json(base), "bimodule": io.bimodule_to_json(cbm),
                      "cocycle": cocycle})
    return OK


def cmd_ext_classes(args) -> int:
    pair = _load_pair(args.algebra)
    cbm = _load_bimodule(args.bimodule, pair)
    v = pair.verdict
    if not v:
        raise LeibnizError(f"the brackets are not a compatible pair: {v.describe()}")
    v = is_compatible_bimodule(pair, cbm)
    if not v:
        raise LeibnizError(f"not a compatible bimodule: {v.describe()}")
    dim = ext_classes_dim(pair, cbm)
    out = _Out()
    out(str(dim))
    _emit(args, out, {"dimension": dim})
    return OK


# catalog

def _parse_params(items: Sequence[str] | None) -> dict:
    params = {}
    for item in items or []:
        if "=" not in item:
            raise LeibnizError(f"parameter {item!r} must look like alpha=2")
        key, value = item.split("=", 1)
        key = key.strip()
        key = "alpha" if key in ("α", "a") else key
        params[key] = io.scalar_from_json(value.strip(), f"--param {item}")
    return params


def cmd_catalog_list(args) -> int:
    out, rows = _Out(), []
    for name, e in CATALOG.items():
        param = f" [{e.parameter}: {e.admissible_text}]" if e.parameter else ""
        out(f"{name}: {', '.join(e.tags)}{param}")
        rows.append({"name": name, "dim": e.dim, "tags": list(e.tags), "parameter": e.parameter,
                     "admissible": e.admissible_text or None})
    _emit(args, out, {"entries": rows})
    return OK


def cmd_catalog_show(args) -> int:
    e = entry(args.name)
    params = _parse_params(args.param)
    b = e.generate(params)
    out = _Out()
    out(f"{e.name} ({', '.join(e.tags)})" + (f" with {', '.join(f'{k}={v}' for k, v in sorted(params.items()))}" if params else ""))
    d = b.dim
    for i in range(d):
        for j in range(d):
            vec = b.coeffs[i, j]
            if any(vec):
                out(f"[e{i + 1},e{j + 1}] = {format_vector(vec)}")
    payload = io.algebra_to_json(b)
    payload["name"] = e.name
    payload["params"] = {k: io.scalar_to_json(v) for k, v in sorted(params.items())}
    _emit(args, out, payload)
    return OK


def cmd_catalog_verify(args) -> int:
    out = _Out()
    checks = verify_catalog()
    entries_ok = all(c.ok for c in checks)
    entry_rows = []
    for c in checks:
        label = c.name + (f" alpha={c.params['alpha']}" if c.params else "")
        if not c.leibniz:
            status = c.leibniz.describe()
        elif c.antisymmetry is not None and not c.antisymmetry:
            status = c.antisymmetry.describe()
        else:
            status = "PASS"
        out(f"{label}: {status}")
        entry_rows.append({"entry": c.name, "params": {k: io.scalar_to_json(v) for k, v in c.params.items()},
                           "pass": c.ok})
    payload = {"entries": entry_rows, "pass": entries_ok}
    pairs_ok = True
    if args.pairs:
        rows = verify_claims(PAIR_CLAIMS, attempts=args.search_attempts, seed=args.seed)
        out("")
        out("pair claims:")
        for r in rows:
            params = ", ".join(f"alpha={a}" for _, a in sorted(r.params.items()))
            head = r.label if not params or "alpha=" in r.label else f"{r.label} {params}"
            line = f"{head}: {r.status}"
            if r.status == "witness-found":
                line += f" basis {r.basis} (canonical check: {r.witness})"
            elif r.status == "unresolved":
                line += f" (canonical check: {r.witness})"
            out(line)
        summary = json.loads(report_to_json(rows))
        out("summary: " + ", ".join(f"{k} {v}" for k, v in sorted(summary["summary"].items())))
        payload["pairs"] = summary
        pairs_ok = all(r.status != "unresolved" for r in rows)
    payload["pass"] = entries_ok and pairs_ok
    _emit(args, out, payload)
    return OK if entries_ok and pairs_ok else FAILED


def _write(path: str, data) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(io.dumps(data))
    except OSError as exc:
        raise LeibnizError(f"{path}: cannot write file: {exc.strerror}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = _Parser(prog="compat-leibniz", description="Exact computations for compatible Leibniz algebras.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("check", parents=[common], help="Leibniz identity and compatibility checks")
    s.add_argument("--algebra", required=True)
    s.add_argument("--compatible", action="store_true", help="also check the mixed compatibility condition")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("mc-check", parents=[common], help="Maurer-Cartan components [m1,m1], [m1,m2], [m2,m2]")
    s.add_argument("--algebra", required=True)
    s.set_defaults(func=cmd_mc_check)

    s = sub.add_parser("cohomology", parents=[common], help="cohomology dimensions or coboundaries")
    s.add_argument("--algebra", required=True)
    s.add_argument("--degree", type=int)
    s.add_argument("--coefficients", choices=["adjoint", "trivial"], default="adjoint")
    s.add_argument("--module-dim", type=int, default=1, help="module dimension for trivial coefficients")
    s.add_argument("--bimodule", help="bimodule file (overrides --coefficients)")
    s.add_argument("--compatible", action="store_true", help="use the compatible complex")
    s.add_argument("--bracket", type=int, choices=[1, 2], default=1, help="bracket for the single complex")
    s.add_argument("--cochain", help="apply the coboundary to this cochain file instead")
    s.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("deform", help="truncated formal deformations")
    dsub = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    t = dsub.add_parser("verify", parents=[common])
    t.add_argument("file")
    t.set_defaults(func=cmd_deform_verify)
    t = dsub.add_parser("obstruction", parents=[common])
    t.add_argument("file")
    t.set_defaults(func=cmd_deform_obstruction)
    t = dsub.add_parser("extend", parents=[common])
    t.add_argument("file")
    t.add_argument("-o", "--output", required=True)
    t.set_defaults(func=cmd_deform_extend)
    t = dsub.add_parser("gauge", parents=[common])
    t.add_argument("file")
    t.add_argument("--phi", required=True)
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_deform_gauge)

    s = sub.add_parser("ext", help="abelian extensions")
    esub = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    t = esub.add_parser("build", parents=[common])
    t.add_argument("--algebra", required=True)
    t.add_argument("--bimodule", required=True, help="bimodule file or 'adjoint'")
    t.add_argument("--cocycle", required=True)
    t.add_argument("-o", "--output", required=True)
    t.set_defaults(func=cmd_ext_build)
    t = esub.add_parser("extract", parents=[common])
    t.add_argument("file")
    t.set_defaults(func=cmd_ext_extract)
    t = esub.add_parser("classes", parents=[common])
    t.add_argument("--algebra", required=True)
    t.add_argument("--bimodule", required=True, help="bimodule file or 'adjoint'")
    t.set_defaults(func=cmd_ext_classes)

    s = sub.add_parser("catalog", help="built-in low-dimensional classification")
    csub = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    t = csub.add_parser("list", parents=[common])
    t.set_defaults(func=cmd_catalog_list)
    t = csub.add_parser("show", parents=[common])
    t.add_argument("name")
    t.add_argument("--param", action="append", help="parameter value, e.g. alpha=2")
    t.set_defaults(func=cmd_catalog_show)
    t = csub.add_parser("verify", parents=[common])
    t.add_argument("--pairs", action="store_true", help="also check the listed compatible pairs")
    t.add_argument("--search-attempts", type=int, default=0)
    t.add_argument("--seed", type=int, default=42)
    t.set_defaults(func=cmd_catalog_verify)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else OK
    try:
        return args.func(args)
    except (LeibnizError, ValueError, TypeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
