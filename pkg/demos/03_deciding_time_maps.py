"""Deciding minimality of time maps T^(1/rho), with certificates.

The set of reciprocal times rho for which T^(1/rho) fails to be minimal is
the Q-span of the eigenvalue group.  A NotMinimal verdict carries
``rho = r * lam`` with ``lam`` an explicit integer combination of
eigenvalues; Minimal verdicts rest on the declared independence of the
generators.
"""

from fractions import Fraction

from minflow.basesys import CircleRotation, Odometer, Point
from minflow.functions import Constant
from minflow.qlinear import GeneratorBasis, sqrt_generator
from minflow.spectra import clopen_realization, decide_time_map, rieffel_decomposition, suspension_eigen_group
from minflow.suspension import SuspensionFlow

basis = GeneratorBasis([sqrt_generator("s", 2), sqrt_generator("u", 3, quadratic_closure=False)])
one = Constant(basis.one())

rot = SuspensionFlow(CircleRotation(basis["s"]), one)
for text in ("3/2 + 2*s", "u", "s/3 - 1/7"):
    v = decide_time_map(rot, basis.parse(text))
    line = f"rotation, rho = {text}: {v.name}"
    if v.name == "NotMinimal":
        c = v.certificate
        line += f"  (r = {c.r}, lambda = {c.lam} = {c.combination} . {[str(g) for g in c.generators]})"
    else:
        line += f"  [{v.conditional_on}]"
    print(line)

odo = SuspensionFlow(Odometer([2, 2, 3], basis), one)
print("odometer, rho = 5/7:", decide_time_map(odo, basis.rational(Fraction(5, 7))).name)
print("odometer, rho = s:", decide_time_map(odo, basis["s"]).name)
print("point, rho = 7/3:", decide_time_map(SuspensionFlow(Point(basis), one), basis.rational(Fraction(7, 3))).name)

slow = SuspensionFlow(Odometer([2, 2, 3], basis), Constant(basis.rational(2)))
print("odometer under ceiling 2 has eigenvalues", suspension_eigen_group(slow).group, "(truncated by depth)")

for text in ("3 + 2*s", "s/3", "7/2"):
    d = rieffel_decomposition(rot, basis.parse(text))
    print(f"t = {text} = {d.r1} + {d.r2} * ({d.gamma})")

print("clopen set of measure 5/12:", [(c.word, str(c.measure)) for c in clopen_realization(odo.base, Fraction(5, 12))])
