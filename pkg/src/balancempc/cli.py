"""Command line: ``compile``, ``run``, ``verify`` and ``audit``.

Exit codes: 0 pass, 1 verification failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .apparatus import ProtocolIntegrityError, RandomSource
from .documents import (
    ReportDocument,
    TraceDocument,
    plan_from_json,
    plan_to_json,
    read_json,
    spec_from_json,
    write_json,
    dumps,
)
from .engine import compile_spec, execute
from .functions import PlayerInputs, SpecError
from .verification import audit_resources, verify_all

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


class InvalidInput(Exception):
    pass


def _load(path: str, parse):
    try:
        return parse(read_json(path))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc
    except (SpecError, ValueError) as exc:
        raise InvalidInput(f"{path}: {exc}") from exc


def _plan_line(plan) -> str:
    line = f"{plan.kind.value} n={plan.n} {plan.resources.summary()}"
    if plan.notes:
        line += " notes=" + "; ".join(plan.notes)
    return line


def cmd_compile(args) -> int:
    spec = _load(args.spec, spec_from_json)
    try:
        plan = compile_spec(spec)
    except SpecError as exc:
        raise InvalidInput(str(exc)) from exc
    write_json(args.out, plan_to_json(plan))
    print(_plan_line(plan))
    return EXIT_OK


def cmd_run(args) -> int:
    plan = _load(args.plan, plan_from_json)
    try:
        x = PlayerInputs.parse(args.inputs)
        trace = execute(plan, x, RandomSource.seeded(args.seed))
    except (SpecError, ProtocolIntegrityError) as exc:
        raise InvalidInput(str(exc)) from exc
    doc = TraceDocument.from_trace(trace, x, reveal=args.reveal_randomness).to_json()
    if args.out:
        write_json(args.out, doc)
    print("view: " + " ".join(doc["view"]))
    print(f"output: {doc['output']}")
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = _load(args.spec, spec_from_json)
    plan = _load(args.plan, plan_from_json) if args.plan else compile_spec(spec)
    if plan.n != spec.n:
        raise InvalidInput(f"arity mismatch: spec has n={spec.n}, plan has n={plan.n}")
    reports = verify_all(spec, plan, args.mode)
    doc = ReportDocument.from_reports(spec, plan, reports)
    if args.out:
        write_json(args.out, doc.to_json())
    print(_plan_line(plan))
    for r in reports:
        print(r.summary())
        for ce in r.counterexamples[:3]:
            print("  counterexample: " + json.dumps(ce, sort_keys=True))
    return EXIT_OK if doc.passed else EXIT_FAIL


def cmd_audit(args) -> int:
    plan = _load(args.plan, plan_from_json)
    report = audit_resources(plan)
    print(_plan_line(plan))
    print(report.summary())
    for ce in report.counterexamples:
        print("  discrepancy: " + json.dumps(ce, sort_keys=True))
    if args.out:
        write_json(args.out, ReportDocument.from_reports(plan.source, plan, [report]).to_json())
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="balancempc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a spec document into a plan document")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("run", help="execute a plan once on given inputs")
    p.add_argument("--plan", required=True)
    p.add_argument("--inputs", required=True, help="bit string, player 1 leftmost")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reveal-randomness", action="store_true",
                   help="include the shuffle transcript and weighed masses in the trace")
    p.add_argument("--out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="exhaustively verify a compiled (or given) plan")
    p.add_argument("--spec", required=True)
    p.add_argument("--plan")
    p.add_argument("--mode", choices=["correctness", "security", "resources", "all"], default="all")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("audit", help="recount a plan's resources")
    p.add_argument("--plan", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
