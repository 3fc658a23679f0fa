"""Command-line interface.

Subcommands:

``check FILE``
    Dimension-check a statement file and print the per-hypothesis report.
``prove FILE``
    Run the automatic prover; on success print the replayable script.
``verify-script FILE SCRIPT``
    Replay a hand-written derivation script against a statement.
``eval CORPUS``
    Run the pass@k evaluation harness over a corpus directory.
``units``
    Print the built-in unit/prefix/constant/kind tables.

Exit codes: 0 proved (or, for ``check``, homogeneous; for ``eval``, run
completed), 1 unknown / not homogeneous, 2 refuted, 3 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .checker.dims import check_dimensions, resolve_statement
from .checker.prover import (Proved, ProverConfig, Refuted, Unknown,
                             auto_prove, check_derivation, database_for)
from .checker.script import parse_script, print_script
from .corpus import load_corpus
from .errors import PhysKernelError
from .harness import (BuiltinProver, ExternalProver, render_attempt_log,
                      render_report, run_eval)
from .lang.parser import parse_overrides, parse_statement
from .quantity import DEFAULT_CONTEXT
from .unitdb import UnitDatabase, builtin_database

EXIT_PROVED = 0
EXIT_UNKNOWN = 1
EXIT_REFUTED = 2
EXIT_BAD_INPUT = 3


def _load_db(args) -> UnitDatabase:
    db = builtin_database()
    if getattr(args, "constants", None):
        pairs = parse_overrides(args.constants, db)
        from .checker.evaluate import eval_numeric
        db = db.with_constants(
            {name: eval_numeric(expr, {}, db) for name, expr in pairs})
    return db


def _read_statement(path: str, db: UnitDatabase):
    text = Path(path).read_text(encoding="utf-8")
    stmt = parse_statement(text, db)
    return stmt


def _verdict_payload(verdict) -> dict:
    if isinstance(verdict, Proved):
        return {
            "verdict": "proved",
            "approx_decided": verdict.approx_decided,
            "eval_count": verdict.eval_count,
            "script": print_script(verdict.steps),
            "side_conditions": [
                {"claim": sc.claim, "verified": sc.verified}
                for sc in verdict.side_conditions
            ],
        }
    if isinstance(verdict, Refuted):
        return {
            "verdict": "refuted",
            "env": {name: value for name, value in verdict.env},
            "detail": verdict.detail,
        }
    assert isinstance(verdict, Unknown)
    payload: dict = {"verdict": "unknown", "reason": verdict.reason}
    if verdict.failed_step is not None:
        payload["failed_step"] = verdict.failed_step
    if verdict.dim_report is not None:
        payload["dimensions"] = verdict.dim_report.to_records()
    return payload


def _print_verdict(verdict, fmt: str) -> int:
    if fmt == "json":
        print(json.dumps(_verdict_payload(verdict), indent=2,
                         ensure_ascii=False))
    else:
        if isinstance(verdict, Proved):
            flavor = "up to numeric tolerance" if verdict.approx_decided \
                else "exactly"
            print(f"proved ({flavor})")
            print(print_script(verdict.steps))
            for sc in verdict.side_conditions:
                status = {True: "holds", False: "violated",
                          None: "assumed"}[sc.verified]
                print(f"  side condition: {sc.claim}  [{status}]")
        elif isinstance(verdict, Refuted):
            print("refuted")
            for name, value in verdict.env:
                print(f"  {name} = {value}")
            print(f"  {verdict.detail}")
        else:
            print(f"unknown: {verdict.reason}")
            if verdict.failed_step is not None:
                print(f"  failed at step {verdict.failed_step}")
            if verdict.dim_report is not None:
                print(verdict.dim_report.render())
    return {"proved": EXIT_PROVED, "refuted": EXIT_REFUTED,
            "unknown": EXIT_UNKNOWN}[verdict.kind]


def _cmd_check(args) -> int:
    db = _load_db(args)
    stmt = _read_statement(args.file, db)
    full_db = database_for(stmt, db)
    resolved = resolve_statement(stmt, full_db)
    report = check_dimensions(resolved, full_db)
    if args.format == "json":
        print(json.dumps({"homogeneous": report.homogeneous,
                          "entries": report.to_records()},
                         indent=2, ensure_ascii=False))
    else:
        print(report.render())
    return EXIT_PROVED if report.homogeneous else EXIT_UNKNOWN


def _cmd_prove(args) -> int:
    db = _load_db(args)
    stmt = _read_statement(args.file, db)
    verdict = auto_prove(stmt, db, ProverConfig())
    return _print_verdict(verdict, args.format)


def _cmd_verify_script(args) -> int:
    db = _load_db(args)
    stmt = _read_statement(args.file, db)
    script_text = Path(args.script).read_text(encoding="utf-8")
    full_db = database_for(stmt, db)
    steps = parse_script(script_text, stmt, full_db)
    verdict = check_derivation(stmt, steps, db, ProverConfig())
    return _print_verdict(verdict, args.format)


def _cmd_eval(args) -> int:
    db = _load_db(args)
    entries = load_corpus(args.corpus, db)
    if args.prover_cmd:
        import shlex
        binding = ExternalProver(tuple(shlex.split(args.prover_cmd)),
                                 timeout=args.timeout)
    else:
        binding = BuiltinProver(db)
    report, attempts = run_eval(entries, binding, k=args.k, jobs=args.jobs,
                                db=db)
    if args.report:
        Path(args.report).write_text(report.to_json(), encoding="utf-8")
    if args.attempts:
        Path(args.attempts).write_text(render_attempt_log(attempts) + "\n",
                                       encoding="utf-8")
    if args.format == "json":
        print(report.to_json(), end="")
    else:
        print(render_report(report))
    return EXIT_PROVED


def _cmd_units(args) -> int:
    db = _load_db(args)
    if args.format == "json":
        obj = {
            "units": {n: db.units[n].dim.render() for n in sorted(db.units)},
            "prefixes": {n: str(db.prefixes[n].factor)
                         for n in sorted(db.prefixes)},
            "constants": {n: db.constants[n].quantity.render()
                          for n in sorted(db.constants)},
            "kinds": {n: db.kinds[n].dim.render() for n in sorted(db.kinds)},
        }
        print(json.dumps(obj, indent=2, ensure_ascii=False))
    else:
        print(db.render_table())
    return EXIT_PROVED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="physkernel",
        description="dimension checking and derivation verification for"
                    " physics statements")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--constants", metavar="OVERRIDES",
                       help="constant overrides, e.g. 'g = 9.8 •"
                            " meter / second**2'")

    p = sub.add_parser("check", help="dimension-check a statement file")
    p.add_argument("file")
    common(p)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("prove", help="run the automatic prover")
    p.add_argument("file")
    common(p)
    p.set_defaults(fn=_cmd_prove)

    p = sub.add_parser("verify-script",
                       help="replay a derivation script against a statement")
    p.add_argument("file")
    p.add_argument("script")
    common(p)
    p.set_defaults(fn=_cmd_verify_script)

    p = sub.add_parser("eval", help="run the pass@k harness over a corpus")
    p.add_argument("corpus")
    p.add_argument("-k", type=int, default=1,
                   help="attempts per entry (default 1)")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel workers (default 1)")
    p.add_argument("--timeout", type=float, default=60.0,
                   help="per-attempt timeout for external provers, seconds")
    p.add_argument("--report", metavar="FILE",
                   help="write the deterministic JSON report here")
    p.add_argument("--attempts", metavar="FILE",
                   help="write the timed attempt log here")
    p.add_argument("--prover-cmd", metavar="CMD",
                   help="external prover command speaking line-JSON;"
                        " default is the built-in automatic prover")
    common(p)
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("units", help="print the built-in unit tables")
    common(p)
    p.set_defaults(fn=_cmd_units)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except PhysKernelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
