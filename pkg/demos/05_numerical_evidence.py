"""Numerical shadows of the exact answers: orbit coverage, Weyl sums and
Birkhoff averages.  None of this feeds the decider."""

from fractions import Fraction

from minflow.basesys import CircleRotation
from minflow.functions import Constant, TrigPoly
from minflow.numlab import asymptotic_cycle_estimate, character_tests, orbit_coverage, weyl_detector
from minflow.qlinear import GeneratorBasis, reciprocal, sqrt_generator
from minflow.suspension import SuspensionFlow

basis = GeneratorBasis([sqrt_generator("s", 2), sqrt_generator("u", 3, quadratic_closure=False)])
rot = CircleRotation(basis["s"])
flow = SuspensionFlow(rot, Constant(basis.one()))
start = flow.point(0.1, 0.2)

for label, rho in (("1 + s", basis.parse("1 + s")), ("u", basis["u"])):
    t = float(reciprocal(rho)) if reciprocal(rho) is not None else 1 / float(rho)
    rep = orbit_coverage(flow, t, start, 200_000)
    print(f"time 1/({label}): coverage {rep.fraction:.3f}; curve {[(n, round(v, 3)) for n, v in rep.curve[-3:]]}")

tests = character_tests(flow, 8)
for lam in (1.0, float(basis["s"]), 0.5, float(basis["u"])):
    rep = weyl_detector(flow, lam, 0.3, 100_000, tests)
    print(f"lambda = {lam:.6f}: D_N = {rep.final:.2e} -> {rep.verdict}")

wavy = SuspensionFlow(rot, TrigPoly.make(2, [(1, Fraction(1, 2), Fraction(1, 3))]))
print("Birkhoff mean of the ceiling:", asymptotic_cycle_estimate(wavy, 1.0, 0.3, 10**6), "(exact 2)")
