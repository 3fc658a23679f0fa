"""Dimensioned quantities over a two-tier exact/approximate numeric tower.

Numeric values come in exactly two tiers:

* **Exact** — :class:`fractions.Fraction`, arbitrary precision. Addition,
  subtraction, multiplication, division, and integer powers of exact values
  are exact, bit-for-bit reproducible, and never silently degrade.
* **Approx** — :class:`Approx`, a :class:`decimal.Decimal` carried together
  with the precision (significant digits) it was computed at.  Only
  operations without an exact representable result (non-perfect rational
  roots, logarithms, exponentials, trigonometry) produce this tier, and once
  a computation touches it the result stays approximate.

Floats are never used in semantics.  Comparisons between values involving the
approximate tier are decided by a relative tolerance from the ambient
:class:`NumericContext` (default 50 significant digits, relative tolerance
10^-30) and report themselves as tolerance-based so callers can distinguish
exact decisions from approximate ones.

A :class:`Quantity` pairs a numeric value with an exact
:class:`~physkernel.dimension.Dimension`.  Additive operations require equal
dimensions, multiplicative ones combine them, powers scale them, and ``cast``
re-types a value only between equal dimensions.  Division by a zero quantity
is an error (:class:`~physkernel.errors.DivisionByZero`); this package does
not adopt the total-division convention (x / 0 = 0) of some proof assistants.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Union

from .dimension import DIMENSIONLESS, Dimension
from .errors import (
    DimensionMismatch,
    DivisionByZero,
    InvalidCast,
    NegativeBaseRationalExponent,
)

__all__ = [
    "Approx",
    "NumericValue",
    "NumericContext",
    "DEFAULT_CONTEXT",
    "NumComparison",
    "Quantity",
    "compare_values",
    "render_numeric",
    "dec_sin",
    "dec_cos",
    "dec_pi",
]

# 110 significant digits of pi; enough for the default precision plus guard
# digits, and validated against an independent oracle in the test suite.
_PI_DIGITS = (
    "3.14159265358979323846264338327950288419716939937510"
    "582097494459230781640628620899862803482534211706798214808651"
)


@dataclass(frozen=True)
class Approx:
    """An approximate numeric value: a Decimal plus its precision in digits."""

    value: Decimal
    precision: int

    def __post_init__(self):
        if not isinstance(self.value, Decimal):
            object.__setattr__(self, "value", Decimal(self.value))

    def __str__(self) -> str:
        return f"~{self.value}"


NumericValue = Union[Fraction, Approx]


@dataclass(frozen=True)
class NumericContext:
    """Working precision and comparison tolerance for approximate values."""

    precision: int = 50
    rel_tol: Fraction = Fraction(1, 10**30)
    guard_digits: int = 10

    def decimal_context(self) -> decimal.Context:
        return decimal.Context(prec=self.precision + self.guard_digits)


DEFAULT_CONTEXT = NumericContext()


def dec_pi(ctx: NumericContext = DEFAULT_CONTEXT) -> Decimal:
    """Pi at the context's working precision (from a frozen digit table)."""
    work = ctx.precision + ctx.guard_digits
    if work > 100:
        raise ValueError("precision beyond the frozen 100-digit pi table")
    return ctx.decimal_context().plus(Decimal(_PI_DIGITS))


def _to_decimal(v: NumericValue, ctx: NumericContext) -> Decimal:
    c = ctx.decimal_context()
    if isinstance(v, Approx):
        return c.plus(v.value)
    return c.divide(Decimal(v.numerator), Decimal(v.denominator))


def _approx(d: Decimal, ctx: NumericContext) -> Approx:
    return Approx(d, ctx.precision)


def _is_zero(v: NumericValue) -> bool:
    return v.value == 0 if isinstance(v, Approx) else v == 0


def render_numeric(v: NumericValue) -> str:
    """Human-readable value: exact rationals plainly, approximations with ~."""
    if isinstance(v, Approx):
        return f"~{v.value.normalize()}"
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


# ---------------------------------------------------------------------------
# numeric arithmetic over the two tiers
# ---------------------------------------------------------------------------

def _num_binop(a: NumericValue, b: NumericValue, op: str,
               ctx: NumericContext) -> NumericValue:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        if op == "add":
            return a + b
        if op == "sub":
            return a - b
        if op == "mul":
            return a * b
        if op == "div":
            return a / b
    c = ctx.decimal_context()
    da, db = _to_decimal(a, ctx), _to_decimal(b, ctx)
    if op == "add":
        return _approx(c.add(da, db), ctx)
    if op == "sub":
        return _approx(c.subtract(da, db), ctx)
    if op == "mul":
        return _approx(c.multiply(da, db), ctx)
    return _approx(c.divide(da, db), ctx)


def _num_neg(a: NumericValue) -> NumericValue:
    if isinstance(a, Approx):
        # copy_negate is exact; bare -a.value would round through the
        # global decimal context.
        return Approx(a.value.copy_negate(), a.precision)
    return -a


def _num_abs(a: NumericValue) -> NumericValue:
    if isinstance(a, Approx):
        return Approx(a.value.copy_abs(), a.precision)
    return abs(a)


def _iroot(x: int, n: int) -> tuple[int, bool]:
    """Largest integer r with r**n <= x, and whether r**n == x (x >= 0)."""
    if x < 0:
        raise ValueError("negative radicand")
    if x in (0, 1) or n == 1:
        return x, True
    r = 1 << ((x.bit_length() + n - 1) // n)
    while True:
        nr = ((n - 1) * r + x // r ** (n - 1)) // n
        if nr >= r:
            break
        r = nr
    while r ** n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r, r ** n == x


def _dec_pow(base: NumericValue, exponent: Fraction,
             ctx: NumericContext) -> Approx:
    """base**exponent via exp(exponent * ln(base)); base must be positive."""
    c = ctx.decimal_context()
    db = _to_decimal(base, ctx)
    de = c.divide(Decimal(exponent.numerator), Decimal(exponent.denominator))
    return _approx(c.multiply(de, c.ln(db)).exp(c), ctx)


def _num_pow(a: NumericValue, e: Fraction, ctx: NumericContext) -> NumericValue:
    if e.denominator == 1:
        n = e.numerator
        if n < 0 and _is_zero(a):
            raise DivisionByZero("zero base with a negative exponent")
        if isinstance(a, Fraction):
            return a ** n
        c = ctx.decimal_context()
        return _approx(c.power(a.value, Decimal(n)), ctx)
    # Non-integer exponent: the base must be strictly positive.
    negative = a.value <= 0 if isinstance(a, Approx) else a <= 0
    if negative:
        raise NegativeBaseRationalExponent(
            f"cannot raise non-positive base {render_numeric(a)} "
            f"to the non-integer power {e}"
        )
    if isinstance(a, Fraction):
        # Try for an exact perfect root before degrading to Approx.
        rn, ok_n = _iroot(a.numerator, e.denominator)
        if ok_n:
            rd, ok_d = _iroot(a.denominator, e.denominator)
            if ok_d:
                return Fraction(rn, rd) ** e.numerator
    return _dec_pow(a, e, ctx)


@dataclass(frozen=True)
class NumComparison:
    """Outcome of comparing two numeric values.

    ``exact`` is True when both operands were exact, in which case ``equal``
    and ``sign`` are ground truth.  Otherwise the comparison was decided at
    the context's relative tolerance: values within tolerance compare equal
    (sign 0), and the ordering of values beyond tolerance is trusted.
    """

    exact: bool
    equal: bool
    sign: int  # sign of (a - b); 0 exactly when equal


def compare_values(a: NumericValue, b: NumericValue,
                   ctx: NumericContext = DEFAULT_CONTEXT) -> NumComparison:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        s = 0 if a == b else (-1 if a < b else 1)
        return NumComparison(exact=True, equal=(s == 0), sign=s)
    c = ctx.decimal_context()
    da, db = _to_decimal(a, ctx), _to_decimal(b, ctx)
    diff = c.subtract(da, db).copy_abs()
    scale = max(da.copy_abs(), db.copy_abs())
    if scale == 0:
        return NumComparison(exact=False, equal=True, sign=0)
    tol = c.multiply(_to_decimal(Fraction(ctx.rel_tol), ctx), scale)
    if diff <= tol:
        return NumComparison(exact=False, equal=True, sign=0)
    return NumComparison(exact=False, equal=False, sign=-1 if da < db else 1)


# ---------------------------------------------------------------------------
# decimal trigonometry (argument reduction + Taylor series)
# ---------------------------------------------------------------------------

def _dec_reduce(x: Decimal, ctx: NumericContext) -> Decimal:
    """Reduce x into (-pi, pi] modulo 2*pi."""
    c = ctx.decimal_context()
    two_pi = c.multiply(Decimal(2), dec_pi(ctx))
    n = c.divide_int(x, two_pi)
    r = c.subtract(x, c.multiply(n, two_pi))
    pi = dec_pi(ctx)
    if r > pi:
        r = c.subtract(r, two_pi)
    elif r <= -pi:
        r = c.add(r, two_pi)
    return r


def _dec_sin_series(x: Decimal, c: decimal.Context) -> Decimal:
    total, term, i = x, x, 1
    neg_x2 = c.multiply(x, x).copy_negate()
    while True:
        term = c.divide(c.multiply(term, neg_x2),
                        Decimal((2 * i) * (2 * i + 1)))
        new_total = c.add(total, term)
        if new_total == total:
            return total
        total = new_total
        i += 1


def _dec_cos_series(x: Decimal, c: decimal.Context) -> Decimal:
    total, term, i = Decimal(1), Decimal(1), 1
    neg_x2 = c.multiply(x, x).copy_negate()
    while True:
        term = c.divide(c.multiply(term, neg_x2),
                        Decimal((2 * i - 1) * (2 * i)))
        new_total = c.add(total, term)
        if new_total == total:
            return total
        total = new_total
        i += 1


def dec_sin(v: NumericValue, ctx: NumericContext = DEFAULT_CONTEXT) -> Approx:
    x = _dec_reduce(_to_decimal(v, ctx), ctx)
    return _approx(_dec_sin_series(x, ctx.decimal_context()), ctx)


def dec_cos(v: NumericValue, ctx: NumericContext = DEFAULT_CONTEXT) -> Approx:
    x = _dec_reduce(_to_decimal(v, ctx), ctx)
    return _approx(_dec_cos_series(x, ctx.decimal_context()), ctx)


# ---------------------------------------------------------------------------
# quantities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Quantity:
    """A numeric value paired with an exact dimension vector."""

    value: NumericValue
    dim: Dimension

    def __post_init__(self):
        if isinstance(self.value, int):
            object.__setattr__(self, "value", Fraction(self.value))

    @classmethod
    def zero(cls, dim: Dimension) -> "Quantity":
        """The zero quantity, which exists at every dimension."""
        return cls(Fraction(0), dim)

    @classmethod
    def scalar(cls, value: NumericValue | int) -> "Quantity":
        return cls(Fraction(value) if isinstance(value, int) else value,
                   DIMENSIONLESS)

    @property
    def is_zero(self) -> bool:
        return _is_zero(self.value)

    @property
    def is_exact(self) -> bool:
        return isinstance(self.value, Fraction)

    # -- additive ----------------------------------------------------------

    def add(self, other: "Quantity",
            ctx: NumericContext = DEFAULT_CONTEXT) -> "Quantity":
        if self.dim != other.dim:
            raise DimensionMismatch(self.dim, other.dim, "addition")
        return Quantity(_num_binop(self.value, other.value, "add", ctx), self.dim)

    def sub(self, other: "Quantity",
            ctx: NumericContext = DEFAULT_CONTEXT) -> "Quantity":
        if self.dim != other.dim:
            raise DimensionMismatch(self.dim, other.dim, "subtraction")
        return Quantity(_num_binop(self.value, other.value, "sub", ctx), self.dim)

    def neg(self) -> "Quantity":
        return Quantity(_num_neg(self.value), self.dim)

    # -- multiplicative -----------------------------------------------------

    def mul(self, other: "Quantity",
            ctx: NumericContext = DEFAULT_CONTEXT) -> "Quantity":
        return Quantity(_num_binop(self.value, other.value, "mul", ctx),
                        self.dim.combine(other.dim))

    def div(self, other: "Quantity",
            ctx: NumericContext = DEFAULT_CONTEXT) -> "Quantity":
        if other.is_zero:
            raise DivisionByZero("division by a zero quantity")
        return Quantity(_num_binop(self.value, other.value, "div", ctx),
                        self.dim.combine(other.dim.invert()))

    def smul(self, scalar: NumericValue | int,
             ctx: NumericContext = DEFAULT_CONTEXT) -> "Quantity":
        """Scale by a dimensionless numeric value."""
        s = Fraction(scalar) if isinstance(scalar, int) else scalar
        return Quantity(_num_binop(s, self.value, "mul", ctx), self.dim)

    def pow(self, exponent: Fraction | int,
            ctx: NumericContext = DEFAULT_CONTEXT) -> "Quantity":
        e = Fraction(exponent)
        return Quantity(_num_pow(self.value, e, ctx), self.dim.scale(e))

    # -- retyping and projections -------------------------------------------

    def cast(self, target: Dimension) -> "Quantity":
        """Re-type to an equal dimension; the numeric value is untouched."""
        if self.dim != target:
            raise InvalidCast(self.dim, target)
        return Quantity(self.value, target)

    def val(self) -> NumericValue:
        """The underlying numeric value, forgetting the dimension."""
        return self.value

    def norm(self) -> NumericValue:
        """Absolute value of the underlying numeric value."""
        return _num_abs(self.value)

    # -- comparison ----------------------------------------------------------

    def compare(self, other: "Quantity",
                ctx: NumericContext = DEFAULT_CONTEXT) -> NumComparison:
        if self.dim != other.dim:
            raise DimensionMismatch(self.dim, other.dim, "comparison")
        return compare_values(self.value, other.value, ctx)

    # -- operator sugar (default context) ------------------------------------

    def __add__(self, other: "Quantity") -> "Quantity":
        return self.add(other)

    def __sub__(self, other: "Quantity") -> "Quantity":
        return self.sub(other)

    def __neg__(self) -> "Quantity":
        return self.neg()

    def __mul__(self, other: "Quantity") -> "Quantity":
        return self.mul(other)

    def __truediv__(self, other: "Quantity") -> "Quantity":
        return self.div(other)

    def __pow__(self, exponent: Fraction | int) -> "Quantity":
        return self.pow(exponent)

    def render(self) -> str:
        if self.dim.is_dimensionless:
            return render_numeric(self.value)
        return f"{render_numeric(self.value)} [{self.dim.render()}]"

    def __str__(self) -> str:
        return self.render()
