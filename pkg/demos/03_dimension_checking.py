"""
==================================
Dimension checking a full argument
==================================

The dimension checker walks every hypothesis and the goal, synthesizing
the dimension of each subterm and demanding agreement across +, -, =,
and comparisons.  A statement is *homogeneous* when every labelled line
checks.  The checker pinpoints the first offending subterm of any line
that does not.
"""

import textwrap

from physkernel import builtin_database, check_dimensions, parse_statement

db = builtin_database()


def statement(body):
    return parse_statement(textwrap.dedent(body), db)


good = statement("""\
    theorem drag_balance
      (m : Mass) (v : Speed) (A : Real) (F_d : Force)
      (hA := A = 1/4)
      (hd := F_d = A • (m * v**2 / (1 • meter)))
      (hw := F_d = m * g)
      : v**2 = 4 * g * (1 • meter)
""")

report = check_dimensions(good, db)
print("homogeneous:", report.homogeneous)
for entry in report.entries:
    print(f"  {entry.label:6s} ok")

# Now seed a fault: drop the distance divisor, leaving an energy where a
# force is expected.
bad = statement("""\
    theorem drag_balance_broken
      (m : Mass) (v : Speed) (F_d : Force)
      (hd := F_d = m * v**2)
      : F_d = m * g
""")

report = check_dimensions(bad, db)
print("\nhomogeneous:", report.homogeneous)
for entry in report.entries:
    if entry.homogeneous:
        print(f"  {entry.label:6s} ok")
    else:
        print(f"  {entry.label:6s} MISMATCH: {entry.mismatch.render()}")

# Bare `std` placeholders pick up their unit from the opposite side of a
# comparison, which keeps tabulated data terse.
inferred = statement("""\
    theorem tabulated
      (P : Pressure)
      (hP := P = 101325 • std)
      : P = 101325 • pascal
""")
print("\nstd resolves to:", check_dimensions(inferred, db).homogeneous)
