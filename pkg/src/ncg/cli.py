"""Command line front end: ``ncg list-models | check | fluctuate | action``.

Exit codes: 0 when every result agrees with the model's expected status,
1 when some result differs, 2 for usage errors (unknown model, part or
option).  JSON output is deterministic: sorted keys, no timestamps.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

from . import __version__
from .clifford import GAMMA_BASIS_TAG, OperatorExpr, is_bounded
from .fluctuations import check_transparency, selfadjoint_family
from .models import MODELS, UnknownModel, build, describe, dirac_parts, list_models
from .triples import CheckResult, check_first_order, check_order_zero, validate_triple
from .linalg import Mat
from .twists import (TwistError, TwistedTriple, check_twisted_first_order, minimal_twist, twist_by_grading,
                     twisted_commutator, validate_twisted)

SCHEMA_VERSION = 1

# checks that depend on which piece of D is examined
_D_CHECKS = {"bounded commutators", "bounded twisted commutators", "first order", "twisted first order"}


class UsageError(Exception):
    pass


def _envelope(command: str, body: dict) -> dict:
    return {"schema": SCHEMA_VERSION, "engine": __version__, "gamma_basis": GAMMA_BASIS_TAG,
            "command": command, **body}


@dataclass
class _Target:
    name: str
    model: object
    expected: Callable[[str, str], str]
    refs: List[str]


def _load_gamma_tilde(path: str) -> Mat:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read twisting operator from {path!r}: {exc}") from None
    rows = data.get("gamma_tilde") if isinstance(data, dict) else data
    try:
        return Mat.from_json(rows)
    except Exception as exc:  # malformed entries
        raise UsageError(f"bad twisting operator in {path!r}: {exc}") from None


def resolve(name: str, twist: Optional[str] = None, n_gen: Optional[int] = None) -> _Target:
    """Model by name, optionally twisted by its grading or by a Γ̃ read from a JSON file."""
    desc = describe(name)
    if twist is None:
        return _Target(name, build(name, n_gen), desc.expected_status, desc.refs)
    if desc.twisted:
        raise UsageError(f"model {name!r} is already twisted")
    if twist == "grading" and f"{name}-twist" in MODELS:
        tw = describe(f"{name}-twist")
        return _Target(tw.name, build(tw.name, n_gen), tw.expected_status, tw.refs)
    T = build(name, n_gen)
    try:
        if twist == "grading":
            tt = twist_by_grading(T, name=f"{name}+grading")
        else:
            tt = minimal_twist(T, _load_gamma_tilde(twist), name=f"{name}+twist")
    except TwistError as exc:
        raise UsageError(str(exc)) from None
    return _Target(name, tt, lambda part, check: "PASS", desc.refs)


def _part(name: str, T, part: str) -> OperatorExpr:
    parts = dirac_parts(name, T)
    if part not in parts:
        raise UsageError(f"unknown part {part!r}; choose from {', '.join(sorted(parts))}")
    return parts[part]


def run_checks(name: str, part: str = "all", n_gen: Optional[int] = None, twist: Optional[str] = None) -> dict:
    """Structural checks of a model with D restricted to one named part."""
    tg = resolve(name, twist, n_gen)
    T = tg.model
    D = _part(tg.name, T, part)
    if isinstance(T, TwistedTriple):
        report = validate_twisted(T)
        checks = [c for c in report.checks if c.name not in _D_CHECKS]
        ok, cs = is_bounded(twisted_commutator(D, T.algebra.generic("a"), T))
        checks.append(CheckResult("bounded twisted commutators", "PASS" if ok else "FAIL", cs))
        fo = check_twisted_first_order(T, D)
        checks.append(CheckResult("twisted first order", "PASS" if fo.satisfied else "CONSTRAINED", fo))
        extra = {"twist_transparent": check_transparency(T, D)}
    else:
        report = validate_triple(T)
        checks = [c for c in report.checks if c.name not in _D_CHECKS]
        a = T.generic("a")
        ok, cs = is_bounded(D * OperatorExpr.const(a) - OperatorExpr.const(a) * D)
        checks.append(CheckResult("bounded commutators", "PASS" if ok else "FAIL", cs))
        oz = check_order_zero(T)
        checks.append(CheckResult("order zero", "PASS" if oz.satisfied else "CONSTRAINED", oz))
        fo = check_first_order(T, D)
        checks.append(CheckResult("first order", "PASS" if fo.satisfied else "CONSTRAINED", fo))
        extra = {}
    rows = []
    for c in checks:
        row = c.to_json()
        row["expected"] = tg.expected(part, c.name)
        row["as_expected"] = row["expected"] == c.status
        rows.append(row)
    return {
        "model": T.name,
        "part": part,
        "references": tg.refs,
        "dimension": T.dim,
        "signs": list(report.signs),
        "ko_dimension": report.ko_dim,
        "checks": rows,
        "ok": all(r["as_expected"] for r in rows),
        **extra,
    }


def run_fluctuate(name: str, part: str = "all", product: str = "standard", n_gen: Optional[int] = None,
                  twist: Optional[str] = None) -> dict:
    tg = resolve(name, twist, n_gen)
    T = tg.model
    D = _part(tg.name, T, part)
    if product == "rho" and not isinstance(T, TwistedTriple):
        raise UsageError("the ρ-product needs a twisted model")
    fam = selfadjoint_family(T, D, product)
    out = {"model": T.name, "part": part, "references": tg.refs, "dimension": fam.dimension,
           "family": fam.to_json(), "ok": True}
    if isinstance(T, TwistedTriple):
        out["twist_transparent"] = check_transparency(T, D)
    return out


def run_action(name: str, planewave: Optional[str] = "f0", template: Optional[str] = None) -> dict:
    from .actions import standard_action
    desc = describe(name)
    try:
        setup = standard_action(name, planewave)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if template is not None and template != setup.template.name:
        raise UsageError(f"model {name!r} is compared with the {setup.template.name!r} template")
    res = setup.run()
    return {
        "model": name,
        "references": desc.refs,
        "template": setup.template.name,
        "prefactor": setup.prefactor,
        "planewave": planewave,
        "antisymmetric": setup.kernel.is_antisymmetric(),
        "note": setup.note,
        "kernel": setup.kernel.to_json(),
        "match": res.to_json(),
        "expected_match": setup.expect_match,
        "ok": res.matched == setup.expect_match,
    }


# -- rendering ---------------------------------------------------------------------------

def _md_checks(d: dict) -> str:
    lines = [f"## {d['model']} ({d['part']})", "",
             f"dimension {d['dimension']}, signs {d['signs']}, KO {d['ko_dimension']}", "",
             "| check | status | expected |", "|---|---|---|"]
    for r in d["checks"]:
        lines.append(f"| {r['check']} | {r['status']} | {r['expected']} |")
        for p in r.get("constraints", []):
            lines.append(f"|   | `{p} = 0` | |")
    if "twist_transparent" in d:
        lines += ["", f"twist-transparent: {d['twist_transparent']}"]
    return "\n".join(lines)


def _refs(d: dict) -> List[str]:
    return [f"references: {', '.join(d['references'])}"] if d.get("references") else []


def _md(command: str, d: dict) -> str:
    if command == "list-models":
        lines = ["| model | twisted | title | references |", "|---|---|---|---|"]
        for m in d["models"]:
            lines.append(f"| {m['name']} | {m['twisted']} | {m['title']} | {', '.join(m['references'])} |")
        return "\n".join(lines)
    if command == "check":
        return "\n".join([_md_checks(d)] + _refs(d))
    if command == "fluctuate":
        lines = [f"## {d['model']} ({d['part']})", "", f"real parameters: {d['dimension']}"]
        if "twist_transparent" in d:
            lines.append(f"twist-transparent: {d['twist_transparent']}")
        return "\n".join(lines + _refs(d))
    lines = [f"## {d['model']} vs {d['template']} (×{d['prefactor']})", "",
             f"antisymmetric: {d['antisymmetric']}", f"matched: {d['match']['matched']}"]
    if d["match"]["reason"]:
        lines.append(f"reason: {d['match']['reason']}")
    for k, rows in sorted((d["match"].get("residual") or {}).items()):
        lines.append(f"residual[{k}]: {rows}")
    if d["note"]:
        lines.append(f"note: {d['note']}")
    return "\n".join(lines + _refs(d))


def _emit(command: str, body: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(_envelope(command, body), sort_keys=True, ensure_ascii=False, indent=2))
    else:
        print(_md(command, body))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncg", description="Exact checks for (twisted) spectral triples.")
    p.add_argument("--version", action="version", version=f"ncg {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, part=True):
        sp.add_argument("--format", choices=("json", "md"), default="json")
        if part:
            sp.add_argument("model")
            sp.add_argument("--part", default="all")
            sp.add_argument("--twist", nargs="?", const="grading", default=None, metavar="grading|FILE",
                            help="twist by the grading, or by a twisting operator read from a JSON file")
            sp.add_argument("--generations", type=int, default=None)

    common(sub.add_parser("list-models", help="models, titles and references"), part=False)
    common(sub.add_parser("check", help="structural checks of a model"))
    fl = sub.add_parser("fluctuate", help="selfadjoint (twisted) fluctuations")
    common(fl)
    fl.add_argument("--product", choices=("standard", "rho"), default="standard")
    ac = sub.add_parser("action", help="fermionic action kernel against a Lagrangian template")
    ac.add_argument("model")
    ac.add_argument("--format", choices=("json", "md"), default="json")
    ac.add_argument("--planewave", dest="planewave", default="f0", metavar="ENERGY",
                    help="substitute ∂₀ → i·ENERGY (default f0, the field component f_0)")
    ac.add_argument("--no-planewave", dest="planewave", action="store_const", const=None)
    ac.add_argument("--template", choices=("weyl", "dirac"), default=None)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) if exc.code in (0, None) else 2
    try:
        if args.command == "list-models":
            body = {"models": [m.to_json() for m in list_models()], "ok": True}
        else:
            if args.model not in MODELS:
                raise UnknownModel(args.model)
            if args.command == "action":
                body = run_action(args.model, args.planewave, args.template)
            else:
                if args.generations is not None and args.generations < 1:
                    raise UsageError("--generations must be positive")
                if args.command == "check":
                    body = run_checks(args.model, args.part, args.generations, args.twist)
                else:
                    body = run_fluctuate(args.model, args.part, args.product, args.generations, args.twist)
    except UnknownModel as exc:
        print(f"ncg: unknown model {exc.args[0]!r}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"ncg: {exc}", file=sys.stderr)
        return 2
    _emit(args.command, body, args.format)
    return 0 if body.get("ok", True) else 1


if __name__ == "__main__":
    sys.exit(main())
