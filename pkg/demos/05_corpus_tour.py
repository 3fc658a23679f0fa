"""
=========================
A tour of the benchmark corpus
=========================

Corpus entries live under ``corpus/<topic>/<name>.phys`` next to a
``manifest.json`` that assigns each entry a verification tier:

* ``dimcheck-only`` — the statement must be dimensionally homogeneous;
* ``auto``          — the automatic prover must close the goal;
* ``script``        — a golden ``<name>.proof`` transcript must replay.

Loading validates everything: names match filenames, topics match
directories, every manifest row has a file and vice versa, and tiers
agree with the presence of script files.
"""

import pathlib

from physkernel import (
    auto_prove, builtin_database, check_dimensions, corpus_stats,
    load_corpus,
)

ROOT = pathlib.Path(__file__).resolve().parent.parent
db = builtin_database()

entries = load_corpus(ROOT / "corpus", db)
stats = corpus_stats(entries)
print(f"{len(entries)} entries")
print("by topic:", stats["topics"])
print("by tier: ", stats["tiers"])

# Every entry is dimensionally homogeneous, whatever its tier.
print("\nper-entry dimension check:")
for entry in entries:
    report = check_dimensions(entry.statement, db)
    print(f"  {entry.name:38s} {'ok' if report.homogeneous else 'MISMATCH'}")

# The auto tier also closes under the automatic prover.
print("\nauto-tier proofs:")
for entry in entries:
    if entry.tier.value != "auto":
        continue
    verdict = auto_prove(entry.statement, db)
    print(f"  {entry.name:38s} {verdict.kind}")
