"""Command-line entry point.

Exit codes: 0 on pass/true/OK, 1 on fail/false/rejection, 2 on usage or
load errors.  Output carries no timestamps; repeated runs with the same
inputs and seeds are byte-identical.
"""

from __future__ import annotations

import argparse
import sys

from .errors import TmlError
from .hilbert import check_proof, load_proof
from .modelio import load_model, parse_valuation, serialize_standard
from .nonstandard import NonStandardModel, satisfies_ns
from .parser import parse_formula, parse_signature
from .semantics import (
    DEFAULT_ENUM_CEILING,
    SearchBounds,
    StandardModel,
    enumerate_countermodel,
    satisfies_std,
)
from .suite import FuzzConfig, demonstrate_incompleteness, fuzz_soundness, fuzz_substitution_lemmas
from .syntax import Signature, free_vars, render_typed_ast


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tml",
        description="Two-sorted term-modal logic workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-syntax", help="parse and type-check a formula or signature")
    p.add_argument("--sig", metavar="FILE", help="signature file (.tms)")
    p.add_argument("formula", nargs="?", help="formula to check; omit to check the signature only")

    p = sub.add_parser("eval", help="evaluate a formula in a model file")
    p.add_argument("--model", metavar="FILE", required=True, help="model file (.tmm or .tmn)")
    p.add_argument("--world", metavar="W", required=True)
    p.add_argument("--val", metavar="ASSIGN", default="", help='valuation, e.g. "x=a,y=o"')
    p.add_argument("formula")

    p = sub.add_parser("validity", help="bounded countermodel search in the standard semantics")
    p.add_argument("--sig", metavar="FILE", help="signature file (.tms)")
    p.add_argument("--max-agents", type=int, default=2)
    p.add_argument("--max-objects", type=int, default=1)
    p.add_argument("--max-worlds", type=int, default=2)
    p.add_argument("--enum-ceiling", type=int, default=DEFAULT_ENUM_CEILING)
    p.add_argument("formula")

    p = sub.add_parser("check-proof", help="check a proof file (.tmp)")
    p.add_argument("proof", metavar="FILE")

    sub.add_parser("incompleteness", help="run the composite demonstration report")

    p = sub.add_parser("fuzz", help="run the soundness and substitution fuzz suites")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--samples", type=int, default=1000)

    return parser


def _load_signature(path: str | None) -> Signature:
    if path is None:
        return Signature()
    with open(path, encoding="utf-8") as handle:
        return parse_signature(handle.read())


def _cmd_check_syntax(args) -> int:
    sig = _load_signature(args.sig)
    if args.formula is None:
        sys.stdout.write(sig.to_source())
        return 0
    try:
        formula = parse_formula(sig, args.formula)
    except TmlError as exc:
        print(f"error: {exc}")
        return 1
    print(render_typed_ast(sig, formula))
    return 0


def _cmd_eval(args) -> int:
    model = load_model(args.model)
    if args.world not in model.frame.worlds:
        raise TmlError(f"unknown world '{args.world}'")
    valuation = parse_valuation(model, args.val)
    formula = parse_formula(model.signature, args.formula)
    missing = free_vars(formula) - set(valuation)
    if missing:
        raise TmlError(
            "valuation does not cover free variable(s): " + ", ".join(sorted(missing))
        )
    if isinstance(model, StandardModel):
        verdict = satisfies_std(model, args.world, valuation, formula)
    else:
        verdict = satisfies_ns(model, args.world, valuation, formula)
    print("true" if verdict else "false")
    return 0 if verdict else 1


def _cmd_validity(args) -> int:
    sig = _load_signature(args.sig)
    formula = parse_formula(sig, args.formula)
    bounds = SearchBounds(args.max_agents, args.max_objects, args.max_worlds)
    result = enumerate_countermodel(sig, formula, bounds, enum_ceiling=args.enum_ceiling)
    if result.found is None:
        print("no countermodel within bounds")
        print(f"models checked: {result.models_checked}")
        return 0
    cm = result.found
    val = ", ".join(f"{k}={v.name}" for k, v in sorted(cm.valuation.items())) or "(empty)"
    print("countermodel found")
    print(f"models checked: {result.models_checked}")
    print(f"world: {cm.world}")
    print(f"valuation: {val}")
    sys.stdout.write(serialize_standard(cm.model))
    return 1


def _cmd_check_proof(args) -> int:
    proof = load_proof(args.proof)
    result = check_proof(proof.signature, proof)
    if result.ok:
        print("OK")
        return 0
    print(f"line {result.line}: {result.reason}")
    return 1


def _cmd_incompleteness(_args) -> int:
    report = demonstrate_incompleteness()
    sys.stdout.write(report.to_text())
    return 0 if report.passed else 1


def _cmd_fuzz(args) -> int:
    cfg = FuzzConfig(seed=args.seed, samples=args.samples)
    soundness = fuzz_soundness(cfg)
    substitution = fuzz_substitution_lemmas(cfg)
    sys.stdout.write(soundness.to_text())
    sys.stdout.write(substitution.to_text())
    return 0 if soundness.passed and substitution.passed else 1


_COMMANDS = {
    "check-syntax": _cmd_check_syntax,
    "eval": _cmd_eval,
    "validity": _cmd_validity,
    "check-proof": _cmd_check_proof,
    "incompleteness": _cmd_incompleteness,
    "fuzz": _cmd_fuzz,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except (TmlError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
