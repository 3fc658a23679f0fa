"""
=====================================
Dimensions and dimensioned quantities
=====================================

The bottom layer of physkernel is an exact algebra of physical
dimensions (integer exponent vectors over the seven SI base dimensions)
and quantities built on top of it.  A quantity's numeric value is either
an exact ``Fraction`` or a precision-tracked decimal; exactness survives
every operation that can preserve it, and is lost only at genuinely
irrational corners (roots, transcendental functions).
"""

from fractions import Fraction

from physkernel import DIMENSIONLESS, Quantity, builtin_database

db = builtin_database()

# Kinds name dimension vectors.  They form an abelian group under
# combine (product) and invert (reciprocal).
force = db.kind("Force")
mass = db.kind("Mass")
accel = db.kind("Acceleration")
print("Force          =", force.render())
print("Mass * Accel   =", mass.combine(accel).render())
print("equal?         ", force == mass.combine(accel))

# Exponents are exact rationals, so fractional powers of dimensions are
# representable whenever they should be.
area = db.kind("Length").scale(2)
print("sqrt(Area)     =", area.scale(Fraction(1, 2)).render())

# Quantities pair a value with a dimension.  Unit lookup returns the
# coherent-SI scale factor as an exact rational.
newton = db.unit("newton")
gram = db.unit("gram")
print("one gram       =", gram.value, gram.dim.render())

# Arithmetic: additive operations demand equal dimensions and fail loudly
# otherwise; multiplicative ones combine the vectors.
weight = Quantity(Fraction(3, 2), mass).mul(Quantity(Fraction(49, 5), accel))
print("1.5 kg under g =", weight.value, weight.dim.render())
print("matches newton?", weight.dim == newton.dim)

# Exactness tracking: a rational power with a perfect root stays exact,
# anything else degrades to a 50-digit decimal that remembers it is
# approximate.
nine = Quantity.scalar(Fraction(9, 4))
print("sqrt(9/4)      =", nine.pow(Fraction(1, 2)).value, "(exact)")
two = Quantity.scalar(2)
root = two.pow(Fraction(1, 2))
print("sqrt(2)        =", str(root.value)[:30], "...")

# Comparison is tolerance-aware only when an approximate value is
# involved; two exact values compare exactly.
half = Quantity.scalar(Fraction(1, 2))
print("1/2 == 0.5?    ", half.compare(Quantity.scalar(Fraction(5, 10))).equal)
print("dimensionless  =", DIMENSIONLESS.render())
