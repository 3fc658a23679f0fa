"""
==============================
Evaluating a prover, pass@k
==============================

The harness runs a script-producing prover over the corpus and scores it
with pass@k semantics: up to k attempts per entry, an entry passes when
any attempt's script replays through the independent verifier.  Reports
contain no timing and are byte-for-byte deterministic; wall-clock data
lives in a separate attempt log.

Two bindings ship with the package: ``BuiltinProver`` (the in-process
automatic prover; deterministic, so failures are not retried) and
``ExternalProver`` (any executable speaking the line-oriented JSON
protocol on stdin/stdout, run under a timeout with crash isolation).
"""

import pathlib

from physkernel import (
    BuiltinProver, builtin_database, improvement_delta, load_corpus,
    render_report, run_eval,
)

ROOT = pathlib.Path(__file__).resolve().parent.parent
db = builtin_database()
entries = load_corpus(ROOT / "corpus", db)

report, log = run_eval(entries, BuiltinProver(db), k=1, db=db)
print(render_report(report))

# The attempt log carries the timing and failure detail the report omits.
print("slowest attempts:")
for record in sorted(log, key=lambda r: r.wall_ms, reverse=True)[:3]:
    status = "pass" if record.passed else f"fail ({record.reason})"
    print(f"  {record.entry:38s} {record.wall_ms:6.1f} ms  {status}")

# Reports are deterministic: run it again and the JSON is identical.
again, _ = run_eval(entries, BuiltinProver(db), k=1, db=db)
print("\nbyte-identical re-run:", report.to_json() == again.to_json())

# Comparing two runs of the same binding gives signed per-level deltas.
print("self-delta:", improvement_delta(report, again))
