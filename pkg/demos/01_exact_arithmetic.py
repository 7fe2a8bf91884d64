"""Exact arithmetic over a declared generator basis.

Numbers are rational vectors over (1, g1, ..., gk).  Equality is exact;
order and floor go through shrinking rational enclosures.
"""

from fractions import Fraction

from minflow.qlinear import FgSubgroup, GeneratorBasis, QSubspace, decimal_generator, reciprocal, sqrt_generator

basis = GeneratorBasis(
    [sqrt_generator("s", 2), sqrt_generator("u", 3, quadratic_closure=False), decimal_generator("g", "0.5772156649")],
    independence_note="1, sqrt(2), sqrt(3), g taken as independent over Q",
)

x = basis.parse("3/2 + 2*s")
print("x =", x, "~", float(x))
print("enclosure of width 1e-12:", [float(v) for v in x.interval(Fraction(1, 10**12))])
print("floor(3 + 2s) =", basis.parse("3 + 2*s").floor())

# s = sqrt(2) was declared with quadratic closure, so Q(s) is a field here
print("1/(1 + s) =", reciprocal(basis.parse("1 + s")))
print("(1 + s)(s - 1) =", basis.parse("1 + s") * basis.parse("s - 1"))
# u = sqrt(3) was not, so its reciprocal is not representable
print("1/u representable?", reciprocal(basis["u"]) is not None)

# membership in a finitely generated subgroup returns integer witnesses
Z_sZ = FgSubgroup.of(basis.one(), basis["s"])
print("5 - 3s in Z + sZ:", Z_sZ.membership(basis.parse("5 - 3*s")))
print("s/2 in Z + sZ:", Z_sZ.membership(basis.parse("s/2")))

# and in its Q-span, rational coefficients
V = QSubspace(basis, [basis.parse("1 + s")])
print("2 + 2s in span{1 + s}:", V.membership(basis.parse("2 + 2*s")))

H = FgSubgroup.of(basis.rational(Fraction(1, 2)), basis.rational(Fraction(1, 3)))
print("<1/2, 1/3> has lattice basis", H.lattice_basis())
