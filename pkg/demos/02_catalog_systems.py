"""The catalog of base systems and their exact spectral data."""

from fractions import Fraction

from minflow.basesys import CircleRotation, Denjoy, Odometer, Point, TorusTranslation
from minflow.functions import CylinderLocallyConstant, TrigPoly
from minflow.qlinear import GeneratorBasis, sqrt_generator

basis = GeneratorBasis([sqrt_generator("s", 2), sqrt_generator("u", 3, quadratic_closure=False)])

od = Odometer([2, 2, 3], basis)
x = od.make_state([1, 1, 2])
print("odometer (2,2,3,3,...):", x.digits, "+ 1 ->", od.step(x).digits, "(carry runs off the end)")
print("one full period of depth-2 cylinders:",
      [od.word(od.step(od.make_state([]), k), 2) for k in range(od.period(2))])
print("1/36 is an eigenvalue?", od.contains_rational(Fraction(1, 36)), "; 1/8?", od.contains_rational(Fraction(1, 8)))

f = CylinderLocallyConstant.make(1, {(0,): 1, (1,): 3})
print("integral of a cylinder function:", od.integrate("haar", f))

rot = CircleRotation(basis["s"])
print("rotation eigenvalues:", rot.eigen_group_lift(), "trace range:", rot.trace_range())
print("integral of 5/2 + cos(2 pi x):", rot.integrate("haar", TrigPoly.make(Fraction(5, 2), [(1, 1, 0)])))

den = Denjoy(basis["s"], [basis.zero(), basis["u"]])
print("Denjoy eigenvalues:", den.eigen_group_lift(), "trace range:", den.trace_range())

print("torus (s, u):", TorusTranslation(basis["s"], basis["u"]).is_minimal().name)
print("torus (s, 2s):", TorusTranslation(basis["s"], basis.parse("2*s")).is_minimal().name)
print("point eigenvalues:", Point(basis).eigen_group_lift())
