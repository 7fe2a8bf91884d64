"""Eigenvalues against trace ranges.

The image of the eigenvalue group under scaling by the mean ceiling always
sits inside the trace range.  For rotations it fills it; for Denjoy systems
the extra marker orbits contribute trace values that are not eigenvalues.
"""

from minflow.basesys import CircleRotation, DeclaredSystem, Denjoy
from minflow.functions import Constant, DeclaredFunction
from minflow.qlinear import FgSubgroup, GeneratorBasis, sqrt_generator
from minflow.spectra import decide_time_map, lambdaK_trace_image, suspension_eigen_group
from minflow.suspension import SuspensionFlow

basis = GeneratorBasis([sqrt_generator("s1", 2), sqrt_generator("s2", 3)])
one = Constant(basis.one())

im = lambdaK_trace_image(SuspensionFlow(CircleRotation(basis["s1"]), one))
print("rotation: image", im.subgroup, "equals trace range:", im.equals_trace_range())

d1 = SuspensionFlow(Denjoy(basis["s1"], [basis.zero(), basis["s2"]]), one)
d2 = SuspensionFlow(Denjoy(basis["s2"], [basis.zero(), basis["s1"]]), one)
im = lambdaK_trace_image(d1)
print("Denjoy(s1; 0, s2): containment", im.containment, "missing", im.missing_from_image())

# same trace range, different eigenvalues
t1, t2 = d1.base.trace_range(), d2.base.trace_range()
print("trace ranges agree:", t1.issubgroup(t2) and t2.issubgroup(t1))
print("s1 eigenvalue of first:", suspension_eigen_group(d1).group.contains(basis["s1"]),
      "of second:", suspension_eigen_group(d2).group.contains(basis["s1"]))

# two invariant measures with the same traces, and a ceiling they integrate
# differently: no nonzero eigenvalues, every time map minimal
two = DeclaredSystem("two", basis, FgSubgroup.of(basis.one()), FgSubgroup.of(basis.one()),
                     {"mu0": {"xi": basis.rational(2)}, "mu1": {"xi": basis.rational(3)}}, traces_agree_on_K0=True)
flow = SuspensionFlow(two, DeclaredFunction("xi", lower_bound=1.0))
print("two-measure system:", suspension_eigen_group(flow).provenance,
      "; rho = 1:", decide_time_map(flow, basis.one()).name)
