"""Recursive-descent parser for the statement language.

The grammar is LL(1) except for one bounded backtrack: at the comparison
level an opening parenthesis may start either a parenthesized proposition or
a parenthesized arithmetic expression, and the parser tries the proposition
reading first.  Whitespace and ``#`` comments are insignificant.  The full
grammar is documented in ``docs/grammar.ebnf``.

Identifier resolution happens during parsing: a bare identifier resolves (in
priority order) to a declared or quantified variable, a unit, or a constant;
anything else is a :class:`~physkernel.errors.ParseError` at the identifier's
span.  Numeric literals — including decimal and scientific forms — denote
exact rationals.  Two literal folds keep printing and parsing mutually
inverse: unary minus of a literal, and division of two literals, fold into a
single rational literal.

Corpus front matter (``name:``, ``level:``, ``topic:``, ``source:``,
``constants:`` lines before the ``theorem`` keyword) is accepted by
:func:`parse_statement` and recorded on the returned
:class:`~physkernel.lang.nodes.Statement`.
"""

from __future__ import annotations

import difflib
import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from ..errors import ParseError
from ..unitdb import UnitDatabase, builtin_database
from . import nodes as N
from .nodes import Span

__all__ = ["parse_statement", "parse_prop", "parse_expression",
           "parse_overrides"]

_NUMBER_RE = re.compile(r"\d+(\.\d+)?([eE][+-]?\d+)?")

# Longest match first.
_OPERATORS = [
    "**", "*.", ":=", "->", "/\\", "\\/", "!=", "<=", ">=",
    "(", ")", "{", "}", ",", ":", "=", "<", ">", "+", "-", "*", "/",
    "•", "∧", "∨", "→", "≤", "≥", "≠", "∀",
]

_KEYWORDS = frozenset(
    ["theorem", "forall", "in", "cast", "unit", "std", "val", "norm",
     "deriv", "rpow", *N.FN_NAMES]
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "number" | "op" | "keyword" | "eof"
    text: str
    span: Span


def _ident_start(ch: str) -> bool:
    return ch == "_" or ch.isidentifier()


def _ident_cont(ch: str) -> bool:
    return ch == "_" or ch.isdigit() or ch.isidentifier()


def tokenize(text: str, start: int = 0) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    for ch in text[:start]:
        if ch == "\n":
            line, col = line + 1, 1
        else:
            col += 1
    i = start
    n = len(text)

    def span(begin: int, end: int, bline: int, bcol: int) -> Span:
        return Span(begin, end, bline, bcol)

    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        bline, bcol = line, col
        if ch.isdigit():
            m = _NUMBER_RE.match(text, i)
            tok = m.group(0)
            tokens.append(Token("number", tok, span(i, m.end(), bline, bcol)))
            col += m.end() - i
            i = m.end()
            continue
        if _ident_start(ch):
            j = i + 1
            while j < n and _ident_cont(text[j]):
                j += 1
            word = text[i:j]
            kind = "keyword" if word in _KEYWORDS else "ident"
            tokens.append(Token(kind, word, span(i, j, bline, bcol)))
            col += j - i
            i = j
            continue
        for op in _OPERATORS:
            if text.startswith(op, i):
                tokens.append(Token("op", op, span(i, i + len(op), bline, bcol)))
                col += len(op)
                i += len(op)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col,
                             span=span(i, i + 1, bline, bcol))
    tokens.append(Token("eof", "", span(n, n, line, col)))
    return tokens


# Alias normalization: every alias maps to its canonical operator.
_OP_ALIASES = {"*.": "•", "/\\": "∧", "\\/": "∨", "→": "->", "≤": "<=",
               "≠": "!=", "∀": "forall", "≥": ">="}


def _canon(tok: Token) -> str:
    if tok.kind == "op":
        return _OP_ALIASES.get(tok.text, tok.text)
    if tok.kind == "keyword":
        return tok.text
    return tok.kind


class _Parser:
    def __init__(self, tokens: list[Token], db: UnitDatabase,
                 extra_constants: frozenset[str] = frozenset()):
        self.tokens = tokens
        self.pos = 0
        self.db = db
        self.extra_constants = extra_constants
        self.scope: dict[str, object] = {}  # name -> VarDecl | FnDecl

    # -- token plumbing ------------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def at(self, *what: str) -> bool:
        return _canon(self.peek()) in what

    def next(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, what: str) -> Token:
        t = self.peek()
        if _canon(t) != what:
            raise self.err(f"unexpected {t.text!r}" if t.text else
                           "unexpected end of input", (what,))
        return self.next()

    def err(self, message: str, expected: tuple[str, ...] = ()) -> ParseError:
        t = self.peek()
        return ParseError(message, t.span.line, t.span.col, expected, t.span)

    @staticmethod
    def _merge(a: Span, b: Span) -> Span:
        return Span(a.start, b.end, a.line, a.col)

    # -- statements -----------------------------------------------------------

    def statement(self, meta: dict[str, str],
                  constants: tuple[tuple[str, N.Expr], ...]) -> N.Statement:
        start = self.expect("theorem").span
        name_tok = self.peek()
        if name_tok.kind != "ident":
            raise self.err("expected a theorem name", ("identifier",))
        self.next()
        decls: list = []
        hyps: list[tuple[str, N.Prop]] = []
        hyp_names: set[str] = set()
        while self.at("("):
            self.next()
            first = self.peek()
            if first.kind != "ident":
                raise self.err("expected a binder name", ("identifier",))
            self.next()
            if self.at(":="):
                self.next()
                if first.text in hyp_names or first.text in self.scope:
                    raise ParseError(
                        f"duplicate binder name {first.text!r}",
                        first.span.line, first.span.col, span=first.span)
                prop = self.prop()
                hyps.append((first.text, prop))
                hyp_names.add(first.text)
            else:
                group = [first]
                while self.peek().kind == "ident":
                    group.append(self.next())
                self.expect(":")
                kind = self._kind()
                for tok in group:
                    if tok.text in self.scope or tok.text in hyp_names:
                        raise ParseError(
                            f"duplicate binder name {tok.text!r}",
                            tok.span.line, tok.span.col, span=tok.span)
                    if isinstance(kind, tuple):
                        d = N.FnDecl(tok.text, kind[0], kind[1], tok.span)
                    else:
                        d = N.VarDecl(tok.text, kind, tok.span)
                    decls.append(d)
                    self.scope[tok.text] = d
            self.expect(")")
        self.expect(":")
        goal = self.prop()
        end = self.expect("eof").span
        return N.Statement(
            name=name_tok.text,
            decls=tuple(decls),
            hyps=tuple(hyps),
            goal=goal,
            level=meta.get("level"),
            topic=meta.get("topic"),
            source=meta.get("source"),
            constants=constants,
            span=self._merge(start, end),
        )

    def _kind_name(self) -> str:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.err("expected a kind name", ("identifier",))
        if not self.db.has_kind(tok.text):
            hints = tuple(difflib.get_close_matches(tok.text, self.db.kinds, n=3))
            raise ParseError(f"unknown kind {tok.text!r}"
                             + (f" (did you mean: {', '.join(hints)}?)"
                                if hints else ""),
                             tok.span.line, tok.span.col, span=tok.span)
        self.next()
        return tok.text

    def _kind(self):
        first = self._kind_name()
        if self.at("->"):
            self.next()
            return (first, self._kind_name())
        return first

    # -- propositions ----------------------------------------------------------

    def prop(self) -> N.Prop:
        if self.at("forall"):
            return self._forall()
        return self._implies()

    def _forall(self) -> N.Prop:
        start = self.expect("forall").span
        var_tok = self.peek()
        if var_tok.kind != "ident":
            raise self.err("expected a quantified variable name", ("identifier",))
        self.next()
        annot: str | None = None
        if self.at(":"):
            self.next()
            annot = self._kind_name()
        values: tuple[Fraction, ...] | None = None
        if self.at("in"):
            self.next()
            self.expect("{")
            vals = [self._signed_rational()]
            while self.at(","):
                self.next()
                vals.append(self._signed_rational())
            self.expect("}")
            if len(set(vals)) != len(vals):
                raise ParseError("duplicate value in quantifier list",
                                 var_tok.span.line, var_tok.span.col,
                                 span=var_tok.span)
            values = tuple(vals)
        self.expect(",")
        shadowed = self.scope.get(var_tok.text)
        self.scope[var_tok.text] = N.VarDecl(var_tok.text, annot or "Real",
                                             var_tok.span)
        body = self.prop()
        if shadowed is None:
            del self.scope[var_tok.text]
        else:
            self.scope[var_tok.text] = shadowed
        span = self._merge(start, _prop_span(body))
        if values is not None:
            if annot is not None:
                raise ParseError(
                    "a finite quantifier takes no kind annotation",
                    var_tok.span.line, var_tok.span.col, span=var_tok.span)
            return N.ForallFinite(var_tok.text, values, body, span)
        return N.ForallFn(var_tok.text, body, annot, span)

    def _implies(self) -> N.Prop:
        lhs = self._or()
        if self.at("->"):
            self.next()
            rhs = self.prop() if self.at("forall") else self._implies()
            return N.Implies(lhs, rhs,
                             self._merge(_prop_span(lhs), _prop_span(rhs)))
        return lhs

    def _or(self) -> N.Prop:
        lhs = self._and()
        while self.at("∨"):
            self.next()
            rhs = self._and()
            lhs = N.Or(lhs, rhs, self._merge(_prop_span(lhs), _prop_span(rhs)))
        return lhs

    def _and(self) -> N.Prop:
        lhs = self._cmp()
        while self.at("∧"):
            self.next()
            rhs = self._cmp()
            lhs = N.And(lhs, rhs, self._merge(_prop_span(lhs), _prop_span(rhs)))
        return lhs

    def _cmp(self) -> N.Prop:
        if self.at("forall"):
            return self._forall()
        if self.at("("):
            # A parenthesized proposition or a parenthesized expression;
            # try the proposition reading first with bounded backtracking.
            saved_pos, saved_scope = self.pos, dict(self.scope)
            try:
                self.next()
                inner = self.prop()
                self.expect(")")
                return inner
            except ParseError:
                self.pos, self.scope = saved_pos, saved_scope
        lhs = self._arith()
        t = _canon(self.peek())
        if t in ("=", "!=", "<=", "<", ">", ">="):
            self.next()
            rhs = self._arith()
            span = self._merge(_expr_span(lhs), _expr_span(rhs))
            if t == "=":
                return N.Eq(lhs, rhs, span)
            if t == "!=":
                return N.Ne(lhs, rhs, span)
            if t == "<=":
                return N.Le(lhs, rhs, span)
            if t == "<":
                return N.Lt(lhs, rhs, span)
            if t == ">=":
                return N.Le(rhs, lhs, span)
            return N.Lt(rhs, lhs, span)
        raise self.err("expected a comparison operator",
                       ("=", "!=", "<=", "<", ">=", ">"))

    # -- expressions --------------------------------------------------------------

    def _arith(self) -> N.Expr:
        lhs = self._term()
        while self.at("+", "-"):
            op = self.next().text
            rhs = self._term()
            span = self._merge(_expr_span(lhs), _expr_span(rhs))
            lhs = N.Add(lhs, rhs, span) if op == "+" else N.Sub(lhs, rhs, span)
        return lhs

    def _term(self) -> N.Expr:
        lhs = self._smul()
        while self.at("*", "/"):
            op = self.next().text
            rhs = self._smul()
            span = self._merge(_expr_span(lhs), _expr_span(rhs))
            if op == "*":
                lhs = N.Mul(lhs, rhs, span)
            elif (isinstance(lhs, N.NumLit) and isinstance(rhs, N.NumLit)
                  and rhs.value != 0):
                lhs = N.NumLit(lhs.value / rhs.value, span)
            else:
                lhs = N.Div(lhs, rhs, span)
        return lhs

    def _smul(self) -> N.Expr:
        lhs = self._unary()
        if self.at("•"):
            self.next()
            rhs = self._smul()
            return N.SMul(lhs, rhs,
                          self._merge(_expr_span(lhs), _expr_span(rhs)))
        return lhs

    def _unary(self) -> N.Expr:
        if self.at("-"):
            start = self.next().span
            arg = self._unary()
            span = self._merge(start, _expr_span(arg))
            if isinstance(arg, N.NumLit):
                return N.NumLit(-arg.value, span)
            return N.Neg(arg, span)
        return self._power()

    def _power(self) -> N.Expr:
        base = self._atom()
        if self.at("**"):
            self.next()
            exponent, end = self._exponent()
            return N.Pow(base, exponent,
                         self._merge(_expr_span(base), end))
        return base

    def _exponent(self) -> tuple[Fraction, Span]:
        if self.at("("):
            self.next()
            value = self._signed_rational()
            end = self.expect(")").span
            return value, end
        neg = False
        if self.at("-"):
            self.next()
            neg = True
        tok = self.peek()
        if tok.kind != "number":
            raise self.err("expected an exponent literal", ("number",))
        self.next()
        value = _fraction_of(tok.text)
        return (-value if neg else value), tok.span

    def _signed_rational(self) -> Fraction:
        neg = False
        if self.at("-"):
            self.next()
            neg = True
        tok = self.peek()
        if tok.kind != "number":
            raise self.err("expected a number", ("number",))
        self.next()
        value = _fraction_of(tok.text)
        if self.at("/"):
            self.next()
            den_tok = self.peek()
            if den_tok.kind != "number":
                raise self.err("expected a denominator", ("number",))
            self.next()
            den = _fraction_of(den_tok.text)
            if den == 0:
                raise ParseError("zero denominator in rational literal",
                                 den_tok.span.line, den_tok.span.col,
                                 span=den_tok.span)
            value /= den
        return -value if neg else value

    def _call_arg(self) -> N.Expr:
        self.expect("(")
        arg = self._arith()
        self.expect(")")
        return arg

    def _atom(self) -> N.Expr:
        tok = self.peek()
        t = _canon(tok)
        if tok.kind == "number":
            self.next()
            return N.NumLit(_fraction_of(tok.text), tok.span)
        if t == "(":
            self.next()
            inner = self._arith()
            end = self.expect(")").span
            return _respan(inner, self._merge(tok.span, end))
        if t == "std":
            self.next()
            return N.StdUnit(None, tok.span)
        if t in N.FN_NAMES:
            self.next()
            arg = self._call_arg()
            return N.Fn(t, arg, self._merge(tok.span, _expr_span(arg)))
        if t == "val" or t == "norm":
            self.next()
            arg = self._call_arg()
            cls = N.Val if t == "val" else N.Norm
            return cls(arg, self._merge(tok.span, _expr_span(arg)))
        if t == "cast":
            self.next()
            self.expect("(")
            arg = self._arith()
            self.expect(",")
            kind = self._kind_name()
            end = self.expect(")").span
            return N.Cast(arg, kind, self._merge(tok.span, end))
        if t == "unit":
            self.next()
            self.expect("(")
            kind = self._kind_name()
            end = self.expect(")").span
            # unit(Kind) is the standard unit at a named kind's dimension.
            return N.Cast(N.StdUnit(None, tok.span), kind,
                          self._merge(tok.span, end))
        if t == "rpow":
            self.next()
            self.expect("(")
            base = self._arith()
            self.expect(",")
            exponent = self._arith()
            end = self.expect(")").span
            return N.RPow(base, exponent, self._merge(tok.span, end))
        if t == "deriv":
            self.next()
            self.expect("(")
            fn = self._fn_var_name()
            self.expect(",")
            at = self._arith()
            end = self.expect(")").span
            return N.Deriv(fn, at, self._merge(tok.span, end))
        if tok.kind == "ident":
            self.next()
            return self._resolve_ident(tok)
        raise self.err(f"unexpected {tok.text!r}" if tok.text else
                       "unexpected end of input", ("expression",))

    def _fn_var_name(self) -> str:
        tok = self.peek()
        if tok.kind != "ident" or not isinstance(self.scope.get(tok.text),
                                                 N.FnDecl):
            raise self.err("expected a declared function variable",
                           ("function variable",))
        self.next()
        return tok.text

    def _resolve_ident(self, tok: Token) -> N.Expr:
        name = tok.text
        decl = self.scope.get(name)
        if self.at("(") and not isinstance(decl, N.VarDecl):
            if isinstance(decl, N.FnDecl):
                arg = self._call_arg()
                return N.Apply(name, arg,
                               self._merge(tok.span, _expr_span(arg)))
            if self.db.has_prefix(name):
                arg = self._call_arg()
                return N.PrefixApp(name, arg,
                                   self._merge(tok.span, _expr_span(arg)))
            raise ParseError(f"{name!r} is not callable",
                             tok.span.line, tok.span.col, span=tok.span)
        if isinstance(decl, N.VarDecl):
            return N.Var(name, tok.span)
        if isinstance(decl, N.FnDecl):
            # Bare function variables are only legal beside another function
            # variable in an equality; the statement validator checks that.
            return N.Var(name, tok.span)
        if self.db.has_unit(name):
            return N.UnitRef(name, tok.span)
        if self.db.has_constant(name) or name in self.extra_constants:
            return N.ConstRef(name, tok.span)
        pool = (list(self.scope) + list(self.db.units)
                + list(self.db.constants))
        hints = tuple(difflib.get_close_matches(name, pool, n=3))
        raise ParseError(
            f"undeclared identifier {name!r}"
            + (f" (did you mean: {', '.join(hints)}?)" if hints else ""),
            tok.span.line, tok.span.col, span=tok.span)


def _fraction_of(text: str) -> Fraction:
    return Fraction(Decimal(text))


def _expr_span(e: N.Expr) -> Span:
    return e.span


def _prop_span(p: N.Prop) -> Span:
    return p.span


def _respan(node, span: Span):
    import dataclasses
    return dataclasses.replace(node, span=span)


# -- statement-level validation ------------------------------------------------

def _validate_fn_var_uses(stmt: N.Statement) -> None:
    """Bare function-variable uses are legal only in f = g equalities."""
    fn_names = {d.name for d in stmt.decls if isinstance(d, N.FnDecl)}
    if not fn_names:
        return

    def check_expr(e: N.Expr, allow: bool) -> None:
        if isinstance(e, N.Var) and e.name in fn_names and not allow:
            raise ParseError(
                f"function variable {e.name!r} used as a quantity",
                e.span.line, e.span.col, span=e.span)
        for c in N.children(e):
            check_expr(c, False)

    def check_prop(p: N.Prop) -> None:
        if isinstance(p, N.Eq):
            both_fn = (isinstance(p.lhs, N.Var) and p.lhs.name in fn_names
                       and isinstance(p.rhs, N.Var) and p.rhs.name in fn_names)
            check_expr(p.lhs, both_fn)
            check_expr(p.rhs, both_fn)
        elif isinstance(p, (N.Le, N.Lt, N.Ne)):
            check_expr(p.lhs, False)
            check_expr(p.rhs, False)
        elif isinstance(p, (N.And, N.Or, N.Implies)):
            check_prop(p.lhs)
            check_prop(p.rhs)
        elif isinstance(p, (N.ForallFinite, N.ForallFn)):
            check_prop(p.body)

    for _, h in stmt.hyps:
        check_prop(h)
    check_prop(stmt.goal)


# -- front matter ---------------------------------------------------------------

_FRONT_KEYS = ("name", "level", "topic", "source", "constants")
_FRONT_RE = re.compile(r"^\s*([A-Za-z_][\w-]*):\s*(.*?)\s*$")


def _split_front_matter(text: str) -> tuple[dict[str, tuple[str, int]], int]:
    """Collect leading ``key: value`` lines; return them and the body offset."""
    meta: dict[str, tuple[str, int]] = {}
    offset = 0
    line_no = 0
    for raw in text.splitlines(keepends=True):
        line_no += 1
        stripped = raw.strip()
        m = _FRONT_RE.match(raw)
        if stripped == "" or stripped.startswith("#"):
            offset += len(raw)
            continue
        if m and not stripped.startswith("theorem"):
            key = m.group(1)
            if key not in _FRONT_KEYS:
                raise ParseError(f"unknown front-matter key {key!r}",
                                 line_no, 1)
            if key in meta:
                raise ParseError(f"duplicate front-matter key {key!r}",
                                 line_no, 1)
            meta[key] = (m.group(2), offset + m.start(2))
            offset += len(raw)
            continue
        break
    return meta, offset


def _parse_constant_overrides(text: str, offset: int, db: UnitDatabase):
    """Parse ``name = expr ; ...`` from a front-matter constants value."""
    overrides: list[tuple[str, N.Expr]] = []
    tokens = tokenize(text, offset)
    p = _Parser(tokens, db)
    while not p.at("eof"):
        name_tok = p.peek()
        if name_tok.kind != "ident":
            raise p.err("expected a constant name", ("identifier",))
        p.next()
        p.expect("=")
        expr = p._arith()
        overrides.append((name_tok.text, expr))
        if p.at(","):
            p.next()
        else:
            break
    p.expect("eof")
    return tuple(overrides)


def parse_statement(text: str, db: UnitDatabase | None = None) -> N.Statement:
    """Parse a statement, with optional corpus front matter, to an AST.

    Parsing is a pure function of (text, database): the same input always
    yields a structurally identical AST.
    """
    db = db or builtin_database()
    meta_raw, offset = _split_front_matter(text)
    meta = {k: v[0] for k, v in meta_raw.items()}
    constants: tuple[tuple[str, N.Expr], ...] = ()
    if "constants" in meta_raw:
        value, value_off = meta_raw["constants"]
        constants = _parse_constant_overrides(text[:value_off + len(value)],
                                              value_off, db)
    extra = frozenset(name for name, _ in constants)
    tokens = tokenize(text, offset)
    parser = _Parser(tokens, db, extra)
    stmt = parser.statement(meta, constants)
    if "name" in meta and meta["name"] != stmt.name:
        raise ParseError(
            f"front-matter name {meta['name']!r} does not match theorem "
            f"name {stmt.name!r}", 1, 1)
    _validate_fn_var_uses(stmt)
    return stmt


def parse_prop(text: str, db: UnitDatabase | None = None,
               variables: dict[str, str] | None = None,
               functions: dict[str, tuple[str, str]] | None = None) -> N.Prop:
    """Parse a standalone proposition under the given variable scope."""
    db = db or builtin_database()
    p = _Parser(tokenize(text), db)
    for name, kind in (variables or {}).items():
        p.scope[name] = N.VarDecl(name, kind)
    for name, (a, r) in (functions or {}).items():
        p.scope[name] = N.FnDecl(name, a, r)
    prop = p.prop()
    p.expect("eof")
    return prop


def parse_expression(text: str, db: UnitDatabase | None = None,
                     variables: dict[str, str] | None = None,
                     functions: dict[str, tuple[str, str]] | None = None
                     ) -> N.Expr:
    """Parse a standalone expression under the given variable scope."""
    db = db or builtin_database()
    p = _Parser(tokenize(text), db)
    for name, kind in (variables or {}).items():
        p.scope[name] = N.VarDecl(name, kind)
    for name, (a, r) in (functions or {}).items():
        p.scope[name] = N.FnDecl(name, a, r)
    expr = p._arith()
    p.expect("eof")
    return expr


def parse_overrides(text: str, db: UnitDatabase | None = None
                    ) -> tuple[tuple[str, N.Expr], ...]:
    """Parse ``name = expr, name = expr`` constant-override pairs."""
    return _parse_constant_overrides(text, 0, db or builtin_database())
