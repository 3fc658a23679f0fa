"""Canonical printer for the statement language.

The printer is the inverse of the parser on ASTs: for every AST ``x`` the
reparse of ``print(x)`` is structurally equal to ``x`` (spans aside).  Output
is deterministic and minimally parenthesized according to the grammar's
precedence table.  Rational literals print as integers, as exact decimals
when the denominator is a product of 2s and 5s with a short expansion, and as
``p/q`` otherwise (the parser folds the latter back into one literal).
"""

from __future__ import annotations

from fractions import Fraction

from . import nodes as N

__all__ = ["print_expr", "print_prop", "print_statement", "render_rational"]

# Precedence levels; a child is parenthesized when its level is below the
# level its context requires.
_P_FORALL = 0
_P_IMPLIES = 1
_P_OR = 2
_P_AND = 3
_P_CMP = 4
_P_ADD = 10
_P_MUL = 11
_P_SMUL = 12
_P_UNARY = 13
_P_POW = 14
_P_ATOM = 15


def render_rational(value: Fraction) -> str:
    """Canonical literal form: integer, short exact decimal, or p/q."""
    if value < 0:
        return "-" + render_rational(-value)
    num, den = value.numerator, value.denominator
    if den == 1:
        return str(num)
    twos = fives = 0
    d = den
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d == 1:
        k = max(twos, fives)
        if k <= 25:
            digits = str(num * 10**k // den).rjust(k + 1, "0")
            return f"{digits[:-k]}.{digits[-k:]}"
    return f"{num}/{den}"


def _rat(value: Fraction) -> tuple[str, int]:
    text = render_rational(value)
    level = _P_ATOM if value >= 0 and value.denominator == 1 else _P_UNARY
    if "/" in text:
        level = _P_MUL  # prints as a division of literals
    return text, level


def _exponent(value: Fraction) -> str:
    if value.denominator == 1 and value >= 0:
        return str(value.numerator)
    if value.denominator == 1:
        return f"({value.numerator})"
    return f"({value.numerator}/{value.denominator})"


def _wrap(text: str, level: int, required: int) -> str:
    return f"({text})" if level < required else text


def _expr(e: N.Expr) -> tuple[str, int]:
    if isinstance(e, N.NumLit):
        return _rat(e.value)
    if isinstance(e, N.Var) or isinstance(e, N.ConstRef) or isinstance(e, N.UnitRef):
        return e.name, _P_ATOM
    if isinstance(e, N.StdUnit):
        return "std", _P_ATOM
    if isinstance(e, N.PrefixApp):
        return f"{e.prefix}({print_expr(e.arg)})", _P_ATOM
    if isinstance(e, N.Add):
        return (f"{_sub(e.lhs, _P_ADD)} + {_sub(e.rhs, _P_ADD + 1)}", _P_ADD)
    if isinstance(e, N.Sub):
        return (f"{_sub(e.lhs, _P_ADD)} - {_sub(e.rhs, _P_ADD + 1)}", _P_ADD)
    if isinstance(e, N.Mul):
        return (f"{_sub(e.lhs, _P_MUL)} * {_sub(e.rhs, _P_MUL + 1)}", _P_MUL)
    if isinstance(e, N.Div):
        return (f"{_sub(e.lhs, _P_MUL)} / {_sub(e.rhs, _P_MUL + 1)}", _P_MUL)
    if isinstance(e, N.SMul):
        return (f"{_sub(e.scalar, _P_UNARY)} • {_sub(e.arg, _P_SMUL)}", _P_SMUL)
    if isinstance(e, N.Neg):
        return f"-{_sub(e.arg, _P_UNARY)}", _P_UNARY
    if isinstance(e, N.Pow):
        return f"{_sub(e.base, _P_ATOM)}**{_exponent(e.exponent)}", _P_POW
    if isinstance(e, N.RPow):
        return f"rpow({print_expr(e.base)}, {print_expr(e.exponent)})", _P_ATOM
    if isinstance(e, N.Cast):
        if isinstance(e.arg, N.StdUnit):
            return f"unit({e.kind})", _P_ATOM
        return f"cast({print_expr(e.arg)}, {e.kind})", _P_ATOM
    if isinstance(e, N.Val):
        return f"val({print_expr(e.arg)})", _P_ATOM
    if isinstance(e, N.Norm):
        return f"norm({print_expr(e.arg)})", _P_ATOM
    if isinstance(e, N.Fn):
        return f"{e.fn}({print_expr(e.arg)})", _P_ATOM
    if isinstance(e, N.Apply):
        return f"{e.fn}({print_expr(e.arg)})", _P_ATOM
    if isinstance(e, N.Deriv):
        return f"deriv({e.fn}, {print_expr(e.at)})", _P_ATOM
    raise TypeError(f"not an expression node: {e!r}")


def _sub(e: N.Expr, required: int) -> str:
    text, level = _expr(e)
    return _wrap(text, level, required)


def print_expr(e: N.Expr) -> str:
    return _expr(e)[0]


_CMP_OPS = {N.Eq: "=", N.Ne: "!=", N.Le: "<=", N.Lt: "<"}


def _prop(p: N.Prop) -> tuple[str, int]:
    for cls, op in _CMP_OPS.items():
        if isinstance(p, cls):
            return f"{print_expr(p.lhs)} {op} {print_expr(p.rhs)}", _P_CMP
    if isinstance(p, N.And):
        return (f"{_psub(p.lhs, _P_AND)} ∧ {_psub(p.rhs, _P_AND + 1)}", _P_AND)
    if isinstance(p, N.Or):
        return (f"{_psub(p.lhs, _P_OR)} ∨ {_psub(p.rhs, _P_OR + 1)}", _P_OR)
    if isinstance(p, N.Implies):
        return (f"{_psub(p.lhs, _P_IMPLIES + 1)} -> {_psub(p.rhs, _P_IMPLIES)}",
                _P_IMPLIES)
    if isinstance(p, N.ForallFinite):
        values = ", ".join(render_rational(v) for v in p.values)
        return (f"forall {p.var} in {{{values}}}, {_psub(p.body, _P_FORALL)}",
                _P_FORALL)
    if isinstance(p, N.ForallFn):
        annot = f" : {p.kind_annot}" if p.kind_annot else ""
        return (f"forall {p.var}{annot}, {_psub(p.body, _P_FORALL)}",
                _P_FORALL)
    raise TypeError(f"not a proposition node: {p!r}")


def _psub(p: N.Prop, required: int) -> str:
    text, level = _prop(p)
    return _wrap(text, level, required)


def print_prop(p: N.Prop) -> str:
    return _prop(p)[0]


def print_statement(stmt: N.Statement, front_matter: bool = False) -> str:
    """Canonical statement text; optionally with its front-matter block."""
    lines: list[str] = []
    if front_matter:
        lines.append(f"name: {stmt.name}")
        if stmt.level:
            lines.append(f"level: {stmt.level}")
        if stmt.topic:
            lines.append(f"topic: {stmt.topic}")
        if stmt.source:
            lines.append(f"source: {stmt.source}")
        if stmt.constants:
            overrides = ", ".join(f"{name} = {print_expr(e)}"
                                  for name, e in stmt.constants)
            lines.append(f"constants: {overrides}")
        lines.append("")
    lines.append(f"theorem {stmt.name}")
    # Group runs of consecutive variable declarations with the same kind.
    i = 0
    decls = stmt.decls
    while i < len(decls):
        d = decls[i]
        if isinstance(d, N.FnDecl):
            lines.append(f"    ({d.name} : {d.arg_kind} -> {d.result_kind})")
            i += 1
            continue
        j = i
        while (j < len(decls) and isinstance(decls[j], N.VarDecl)
               and decls[j].kind == d.kind):
            j += 1
        names = " ".join(x.name for x in decls[i:j])
        lines.append(f"    ({names} : {d.kind})")
        i = j
    for name, prop in stmt.hyps:
        lines.append(f"    ({name} := {print_prop(prop)})")
    lines.append(f"    : {print_prop(stmt.goal)}")
    return "\n".join(lines) + "\n"
