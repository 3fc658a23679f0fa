"""Exact dimension vectors over the seven SI base dimensions.

A :class:`Dimension` is an immutable vector of seven reduced rational
exponents, one per SI base dimension, in the fixed component order

    Time, Length, Mass, Current, Temperature, Amount, LuminousIntensity.

Dimensions form an additive group: :meth:`Dimension.combine` adds exponent
vectors (the dimension of a product), :meth:`Dimension.invert` negates them,
and :meth:`Dimension.scale` multiplies by a rational (the dimension of a
power).  All arithmetic is exact; numerators and denominators of every
component must stay within the signed/unsigned 64-bit range, and any operation
that would leave it raises :class:`~physkernel.errors.DimensionOverflow`
rather than wrapping or approximating.

Rendering uses the conventional SI dimension symbols in the fixed order
``M L T I Θ N J``, omitting zero exponents and writing non-integer exponents
as ``p/q`` (e.g. ``M^1 L^2 T^-2``; the dimensionless vector renders as ``1``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionOverflow

__all__ = ["BaseDim", "Dimension", "DIMENSIONLESS"]

_INT64_MAX = 2**63 - 1


class BaseDim(enum.IntEnum):
    """SI base dimensions; the enum value is the vector component index."""

    TIME = 0
    LENGTH = 1
    MASS = 2
    CURRENT = 3
    TEMPERATURE = 4
    AMOUNT = 5
    LUMINOUS_INTENSITY = 6


# Rendering order and symbols (mass first, per the conventional M L T form).
_RENDER_ORDER = (
    (BaseDim.MASS, "M"),
    (BaseDim.LENGTH, "L"),
    (BaseDim.TIME, "T"),
    (BaseDim.CURRENT, "I"),
    (BaseDim.TEMPERATURE, "Θ"),
    (BaseDim.AMOUNT, "N"),
    (BaseDim.LUMINOUS_INTENSITY, "J"),
)


def _checked(x: Fraction) -> Fraction:
    if abs(x.numerator) > _INT64_MAX or x.denominator > _INT64_MAX:
        raise DimensionOverflow(f"dimension exponent {x} exceeds the 64-bit range")
    return x


@dataclass(frozen=True)
class Dimension:
    """An exact 7-vector of rational exponents over the SI base dimensions."""

    exponents: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.exponents) != 7:
            raise ValueError("a Dimension has exactly 7 exponents")
        object.__setattr__(
            self,
            "exponents",
            tuple(_checked(Fraction(e)) for e in self.exponents),
        )

    # -- constructors ------------------------------------------------------

    @classmethod
    def base(cls, b: BaseDim) -> "Dimension":
        """The dimension vector of a single base dimension."""
        exps = [Fraction(0)] * 7
        exps[int(b)] = Fraction(1)
        return cls(tuple(exps))

    @classmethod
    def from_map(cls, mapping: dict[BaseDim, Fraction | int]) -> "Dimension":
        """Build a dimension from a sparse {base: exponent} mapping."""
        exps = [Fraction(0)] * 7
        for b, e in mapping.items():
            exps[int(b)] = Fraction(e)
        return cls(tuple(exps))

    # -- group operations --------------------------------------------------

    def combine(self, other: "Dimension") -> "Dimension":
        """Dimension of a product: componentwise exponent sum."""
        return Dimension(
            tuple(_checked(a + b) for a, b in zip(self.exponents, other.exponents))
        )

    def invert(self) -> "Dimension":
        """Dimension of a reciprocal: componentwise negation."""
        return Dimension(tuple(-a for a in self.exponents))

    def scale(self, factor: Fraction | int) -> "Dimension":
        """Dimension of a power: componentwise multiplication by ``factor``."""
        f = Fraction(factor)
        return Dimension(tuple(_checked(a * f) for a in self.exponents))

    def subtract(self, other: "Dimension") -> "Dimension":
        """Dimension of a quotient: ``self.combine(other.invert())``."""
        return self.combine(other.invert())

    # -- predicates and rendering ------------------------------------------

    @property
    def is_dimensionless(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def render(self) -> str:
        """Canonical text form, e.g. ``M L^2 T^-2`` or ``1``."""
        parts = []
        for b, symbol in _RENDER_ORDER:
            e = self.exponents[int(b)]
            if e == 0:
                continue
            if e == 1:
                parts.append(symbol)
            elif e.denominator == 1:
                parts.append(f"{symbol}^{e.numerator}")
            else:
                parts.append(f"{symbol}^{e.numerator}/{e.denominator}")
        return " ".join(parts) if parts else "1"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Dimension({self.render()!r})"


DIMENSIONLESS = Dimension(tuple(Fraction(0) for _ in range(7)))
