"""
========================================
The automatic prover and its transcripts
========================================

``auto_prove`` tries to close a statement's goal from its hypotheses and
returns one of three verdicts: Proved (with a replayable derivation
script), Refuted (with a concrete witness environment), or Unknown (with
the reason it gave up).  A Proved verdict is never the end of the story:
the script it carries can be serialized, audited, and replayed through
the independent ``check_derivation`` verifier.
"""

import textwrap

from physkernel import (
    Proved, Refuted, auto_prove, builtin_database, check_derivation,
    parse_statement, print_script,
)
from physkernel.checker.script import parse_script

db = builtin_database()


def statement(body):
    return parse_statement(textwrap.dedent(body), db)


# -- a concrete chain ---------------------------------------------------

free_fall = statement("""\
    theorem free_fall_depth
      (d : Length) (t : Time)
      (ht := t = 3 • second)
      (hd := d = (1/2) * g * t**2)
      : d = (441/10) • meter
""")

verdict = auto_prove(free_fall, db)
print("verdict:       ", verdict.kind)
print("approximation: ", verdict.approx_decided)
print("script:")
print(textwrap.indent(print_script(verdict.steps), "    "))

# The transcript is plain text: parse it back and replay it through the
# independent verifier.
script_text = print_script(verdict.steps)
replayed = check_derivation(
    free_fall, parse_script(script_text, free_fall, db), db)
print("replay verdict:", replayed.kind)

# -- a false claim is refuted with a witness ----------------------------

wrong = statement("""\
    theorem off_by_ten
      (d : Length) (t : Time)
      (ht := t = 3 • second)
      (hd := d = (1/2) * g * t**2)
      : d = 45 • meter
""")
refuted = auto_prove(wrong, db)
print("\nfalse claim:   ", refuted.kind)
assert isinstance(refuted, Refuted)
print("witness:       ", dict(refuted.env)["d"], "—", refuted.detail)

# -- the verifier is not a rubber stamp ---------------------------------

# Corrupt the script (point the substitution at the wrong hypothesis)
# and the replay fails rather than trusting the transcript.
assert isinstance(verdict, Proved)
broken_text = script_text.replace("subst ht", "subst hd")
outcome = check_derivation(free_fall, parse_script(broken_text, free_fall, db), db)
print("\ncorrupted replay:", outcome.kind, "—", outcome.reason)
