"""
===================================
The statement language, round trip
===================================

Physics problems are written as small theorem statements: typed variable
declarations, labelled hypotheses, and a goal proposition.  The parser
produces a spanned AST and the printer produces canonical text; printing
then reparsing is the identity on the AST.
"""

import textwrap

from physkernel import (
    builtin_database, parse_statement, print_statement,
)
from physkernel.lang import ast_eq

db = builtin_database()

TEXT = textwrap.dedent("""\
    name: projectile_peak_height
    level: basic
    topic: mechanics

    theorem projectile_peak_height
      (v_0 : Speed) (h : Length)
      (hv := v_0 = 14 • meter / second)
      (hh := h = v_0**2 / (2 * g))
      : h = 10 • meter
""")

stmt = parse_statement(TEXT, db)
print("name:      ", stmt.name)
print("level:     ", stmt.level)
print("variables: ", ", ".join(d.name for d in stmt.decls))
print("hypotheses:", ", ".join(label for label, _ in stmt.hyps))

# Every node carries its source span, so diagnostics can point at text.
label, prop = stmt.hyps[1]
print(f"{label} spans line {prop.span.line}, col {prop.span.col}")

# The canonical printer normalizes spacing and parenthesization...
canonical = print_statement(stmt, front_matter=True)
print("\ncanonical form:\n")
print(canonical)

# ...and the round trip is exact at the AST level.
again = parse_statement(canonical, db)
print("round trip stable:", ast_eq(stmt, again))

# Parse errors carry positions and expectations.
try:
    parse_statement("theorem broken (x : Length) : x = ", db)
except Exception as err:
    print("diagnostic:", err)
