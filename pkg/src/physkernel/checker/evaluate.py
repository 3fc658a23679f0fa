"""Numeric evaluation of expressions and quantifier-free propositions."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from ..dimension import DIMENSIONLESS
from ..errors import (
    DimensionMismatch, DomainError, ParseError, UnboundVariable,
    UnsupportedNode,
)
from ..lang import nodes as N
from ..quantity import (
    DEFAULT_CONTEXT, NumericContext, Quantity, _approx, _num_pow,
    _to_decimal, dec_cos, dec_sin,
)
from ..unitdb import UnitDatabase, builtin_database


def _eval_fn(name: str, v, ctx: NumericContext):
    if name == "sin":
        return dec_sin(v, ctx)
    if name == "cos":
        return dec_cos(v, ctx)
    if name == "sqrt":
        if (v == 0) if isinstance(v, Fraction) else (v.value == 0):
            return Fraction(0)
        return _num_pow(v, Fraction(1, 2), ctx)
    d = _to_decimal(v, ctx)
    c = ctx.decimal_context()
    if name == "log":
        if d <= 0:
            raise DomainError(f"log of a non-positive value ({d})")
        return _approx(c.ln(d), ctx)
    if name == "exp":
        return _approx(c.exp(d), ctx)
    raise UnsupportedNode(f"unknown builtin function '{name}'")


def eval_numeric(e: N.Expr, env: Mapping[str, Quantity],
                 db: UnitDatabase | None = None,
                 ctx: NumericContext = DEFAULT_CONTEXT) -> Quantity:
    """Evaluate ``e`` to a Quantity under the variable bindings ``env``.

    Free variables, applications, and derivatives have no numeric meaning
    and raise UnboundVariable.
    """
    db = db or builtin_database()
    return _eval(e, env, db, ctx)


def _eval(e: N.Expr, env, db: UnitDatabase, ctx: NumericContext) -> Quantity:
    if isinstance(e, N.NumLit):
        return Quantity.scalar(e.value)
    if isinstance(e, N.ConstRef):
        return db.constant(e.name)
    if isinstance(e, N.Var):
        q = env.get(e.name)
        if q is None:
            raise UnboundVariable(e.name)
        return q
    if isinstance(e, N.UnitRef):
        return db.unit(e.name)
    if isinstance(e, N.StdUnit):
        if e.dim is None:
            raise ParseError("'std' was not resolved to a dimension here",
                             span=e.span)
        return Quantity(Fraction(1), e.dim)
    if isinstance(e, N.PrefixApp):
        return _eval(e.arg, env, db, ctx).smul(db.prefix(e.prefix), ctx=ctx)
    if isinstance(e, N.Add):
        return _eval(e.lhs, env, db, ctx).add(_eval(e.rhs, env, db, ctx), ctx=ctx)
    if isinstance(e, N.Sub):
        return _eval(e.lhs, env, db, ctx).sub(_eval(e.rhs, env, db, ctx), ctx=ctx)
    if isinstance(e, N.Mul):
        return _eval(e.lhs, env, db, ctx).mul(_eval(e.rhs, env, db, ctx), ctx=ctx)
    if isinstance(e, N.Div):
        return _eval(e.lhs, env, db, ctx).div(_eval(e.rhs, env, db, ctx), ctx=ctx)
    if isinstance(e, N.Neg):
        return _eval(e.arg, env, db, ctx).neg()
    if isinstance(e, N.SMul):
        scalar = _eval(e.scalar, env, db, ctx)
        if not scalar.dim.is_dimensionless:
            raise DimensionMismatch(DIMENSIONLESS, scalar.dim,
                                    "scalar position of •")
        return _eval(e.arg, env, db, ctx).smul(scalar.value, ctx=ctx)
    if isinstance(e, N.Pow):
        return _eval(e.base, env, db, ctx).pow(e.exponent, ctx=ctx)
    if isinstance(e, N.RPow):
        base = _eval(e.base, env, db, ctx)
        exponent = _eval(e.exponent, env, db, ctx)
        for part, where in ((base, "base"), (exponent, "exponent")):
            if not part.dim.is_dimensionless:
                raise DimensionMismatch(DIMENSIONLESS, part.dim,
                                        f"{where} of a real power")
        if isinstance(exponent.value, Fraction):
            return Quantity.scalar(_num_pow(base.value, exponent.value, ctx))
        d = _to_decimal(base.value, ctx)
        if d <= 0:
            raise DomainError(
                "an approximate exponent requires a positive base")
        c = ctx.decimal_context()
        return Quantity.scalar(
            _approx(c.multiply(exponent.value.value, c.ln(d)).exp(c), ctx))
    if isinstance(e, N.Cast):
        return _eval(e.arg, env, db, ctx).cast(db.kind(e.kind))
    if isinstance(e, N.Val):
        return Quantity.scalar(_eval(e.arg, env, db, ctx).val())
    if isinstance(e, N.Norm):
        return Quantity.scalar(_eval(e.arg, env, db, ctx).norm())
    if isinstance(e, N.Fn):
        arg = _eval(e.arg, env, db, ctx)
        if not arg.dim.is_dimensionless:
            raise DimensionMismatch(DIMENSIONLESS, arg.dim,
                                    f"argument of {e.fn}")
        return Quantity.scalar(_eval_fn(e.fn, arg.value, ctx))
    if isinstance(e, (N.Apply, N.Deriv)):
        raise UnboundVariable(e.fn)
    raise UnsupportedNode(f"cannot evaluate node {type(e).__name__}")


def eval_prop(p: N.Prop, env: Mapping[str, Quantity],
              db: UnitDatabase | None = None,
              ctx: NumericContext = DEFAULT_CONTEXT) -> tuple[bool, bool]:
    """Truth of a quantifier-free proposition under ``env``.

    Returns ``(truth, exact)`` where ``exact`` means every comparison that
    the verdict rests on was decided exactly.  Quantified propositions raise
    UnsupportedNode.
    """
    db = db or builtin_database()
    return _eval_prop(p, env, db, ctx)


def _eval_prop(p, env, db, ctx) -> tuple[bool, bool]:
    if isinstance(p, (N.Eq, N.Ne, N.Le, N.Lt)):
        left = _eval(p.lhs, env, db, ctx)
        right = _eval(p.rhs, env, db, ctx)
        cmp = left.compare(right, ctx=ctx)
        if isinstance(p, N.Eq):
            return cmp.equal, cmp.exact
        if isinstance(p, N.Ne):
            return not cmp.equal, cmp.exact
        if isinstance(p, N.Le):
            return cmp.sign <= 0, cmp.exact
        return cmp.sign < 0, cmp.exact
    if isinstance(p, N.And):
        lt, le = _eval_prop(p.lhs, env, db, ctx)
        rt, re_ = _eval_prop(p.rhs, env, db, ctx)
        return lt and rt, le and re_
    if isinstance(p, N.Or):
        lt, le = _eval_prop(p.lhs, env, db, ctx)
        rt, re_ = _eval_prop(p.rhs, env, db, ctx)
        return lt or rt, le and re_
    if isinstance(p, N.Implies):
        lt, le = _eval_prop(p.lhs, env, db, ctx)
        rt, re_ = _eval_prop(p.rhs, env, db, ctx)
        return (not lt) or rt, le and re_
    raise UnsupportedNode(
        f"cannot numerically evaluate a {type(p).__name__} proposition")
