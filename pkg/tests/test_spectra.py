import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from minflow.basesys import CircleRotation, DeclaredSystem, Denjoy, Furstenberg, Odometer, Point, TorusTranslation
from minflow.functions import Constant, CylinderLocallyConstant, DeclaredFunction, TrigPoly
from minflow.numlab import DetectorCache, character_tests
from minflow.qlinear import FgSubgroup, reciprocal
from minflow.spectra import (
    DomainError,
    base_character,
    clopen_realization,
    decide_time,
    decide_time_map,
    eigenvector_residual,
    lambdaK_trace_image,
    rieffel_decomposition,
    schwartzman_positive,
    suspension_eigen_group,
    tau_mu_f,
)
from minflow.suspension import SuspensionFlow
from minflow.verdicts import Minimal, NotMinimal, Unknown

from conftest import make_basis

BASIS = make_basis()
ONE = Constant(BASIS.one())
ROT = SuspensionFlow(CircleRotation(BASIS["s"]), ONE)
ODO_BASE = Odometer([2, 2, 3], BASIS)
ODO = SuspensionFlow(ODO_BASE, ONE)
POINT = SuspensionFlow(Point(BASIS), ONE)

lattice = st.tuples(st.integers(-10, 10), st.integers(1, 6), st.integers(-10, 10), st.integers(1, 6)).map(
    lambda t: BASIS.element({"1": F(t[0], t[1]), "s": F(t[2], t[3])}))
nonzero_q = st.fractions(min_value=-20, max_value=20, max_denominator=9).filter(bool)


def two_measure_system(B):
    return DeclaredSystem("two", B, FgSubgroup.of(B.one()), FgSubgroup.of(B.one()),
                          {"mu0": {"xi": B.rational(2)}, "mu1": {"xi": B.rational(3)}}, traces_agree_on_K0=True)


# --- eigenvalue groups -------------------------------------------------------


def test_rotation_eigen_group():
    eg = suspension_eigen_group(ROT)
    assert eg.provenance == "standard"
    assert eg.group.issubgroup(FgSubgroup.of(BASIS.one(), BASIS["s"]))
    assert FgSubgroup.of(BASIS.one(), BASIS["s"]).issubgroup(eg.group)


def test_odometer_rescaled_by_constant_ceiling():
    flow = SuspensionFlow(ODO_BASE, Constant(BASIS.rational(2)))
    eg = suspension_eigen_group(flow)
    assert eg.provenance == "constant-rescale"
    assert eg.group.contains(BASIS.rational(F(1, 24)))
    assert not eg.group.contains(BASIS.rational(F(1, 48)))
    # the detector sees the rescaled group
    det = DetectorCache(flow, ODO_BASE.make_state([]), 20000, character_tests(flow, 4))
    assert det.detect(1 / 24).verdict == "eigen-positive"
    assert det.detect(1 / 12).verdict == "eigen-positive"
    assert det.detect(1 / 48).verdict == "eigen-negative"


def test_irrational_constant_ceiling_rescales():
    # 1 + s is a unit of Z[s], so that ceiling leaves the group unchanged;
    # 2 + s has norm 2 and enlarges it
    unit = SuspensionFlow(CircleRotation(BASIS["s"]), Constant(BASIS.parse("1 + s")))
    assert suspension_eigen_group(unit).group.issubgroup(suspension_eigen_group(ROT).group)
    flow = SuspensionFlow(CircleRotation(BASIS["s"]), Constant(BASIS.parse("2 + s")))
    eg = suspension_eigen_group(flow)
    assert eg.group.contains(BASIS.parse("1 - s/2"))
    assert eg.group.contains(BASIS.parse("s/2"))
    assert not eg.group.contains(BASIS.rational(F(1, 2)))


def test_trig_ceiling_is_cohomologous_to_its_mean():
    flow = SuspensionFlow(CircleRotation(BASIS["s"]), TrigPoly.make(2, [(1, 1, 0)]))
    eg = suspension_eigen_group(flow)
    assert eg.provenance == "cohomologous"
    assert eg.group.contains(BASIS.parse("s/2"))


def test_two_measure_system_has_trivial_group(B):
    flow = SuspensionFlow(two_measure_system(B), DeclaredFunction("xi", lower_bound=1.0))
    eg = suspension_eigen_group(flow)
    assert eg.provenance == "packer-katsura-trivial"
    assert eg.group.generators == ()
    for rho in ("1", "7/3", "s"):
        assert isinstance(decide_time_map(flow, B.parse(rho)), Minimal)


def test_unknown_group_gives_unknown_verdict(B):
    flow = SuspensionFlow(Furstenberg(B["s"], 1), Constant(B.one()))
    assert isinstance(suspension_eigen_group(flow), Unknown)
    assert isinstance(decide_time_map(flow, B.one()), Unknown)


def test_unrepresentable_rescale_is_unknown(B):
    flow = SuspensionFlow(CircleRotation(B["s"]), Constant(B["u"]))
    assert isinstance(suspension_eigen_group(flow), Unknown)


# --- the decider -------------------------------------------------------------


def test_rotation_certificate_example():
    v = decide_time_map(ROT, BASIS.parse("3/2 + 2*s"))
    assert isinstance(v, NotMinimal)
    c = v.certificate
    assert c.check()
    assert (c.r, c.lam) == (F(1, 2), BASIS.parse("3 + 4*s"))


def test_odometer_irrational_is_minimal():
    v = decide_time_map(ODO, BASIS["s"])
    assert isinstance(v, Minimal) and v.conditional_on == BASIS.independence_note


def test_point_rational_is_not_minimal():
    v = decide_time_map(POINT, BASIS.rational(F(7, 3)))
    assert isinstance(v, NotMinimal) and v.certificate.check()
    assert isinstance(decide_time_map(POINT, BASIS["g"]), Minimal)


def test_domain_errors():
    with pytest.raises(DomainError):
        decide_time_map(ROT, BASIS.zero())
    other = make_basis()
    with pytest.raises(DomainError):
        decide_time_map(ROT, other.one())
    assert isinstance(decide_time(ROT, BASIS.zero()), NotMinimal)


def test_wrapper_takes_times():
    assert isinstance(decide_time(ROT, BASIS.parse("-1 + s")), NotMinimal)
    assert isinstance(decide_time(ROT, BASIS.rational(F(2, 5))), NotMinimal)


def test_nonminimal_base_makes_every_time_map_nonminimal(B):
    flow = SuspensionFlow(TorusTranslation(B["s"], B.parse("2*s")), Constant(B.one()))
    assert isinstance(decide_time_map(flow, B["u"]), NotMinimal)


@given(lattice)
def test_certificates_are_sound(rho):
    assume(rho)
    v = decide_time_map(ROT, rho)
    assert isinstance(v, NotMinimal)
    c = v.certificate
    assert c.check() and c.lam * c.r == rho
    assert suspension_eigen_group(ROT).group.membership(c.lam) == c.combination


@given(lattice, lattice, nonzero_q, nonzero_q)
def test_nonminimal_reciprocals_form_a_vector_space(a, b, q1, q2):
    assume(a and b)
    combo = a * q1 + b * q2
    if not combo:
        with pytest.raises(DomainError):
            decide_time_map(ROT, combo)
    else:
        assert isinstance(decide_time_map(ROT, combo), NotMinimal)


@given(lattice, nonzero_q)
def test_rational_multiples_of_times(rho, q):
    assume(rho)
    assert isinstance(decide_time_map(ROT, rho / q), NotMinimal)


@given(lattice, st.fractions(min_value=-5, max_value=5, max_denominator=7).filter(bool))
def test_independent_direction_is_minimal(rho, q):
    assert isinstance(decide_time_map(ROT, rho + BASIS["u"] * q), Minimal)


# --- Rieffel decompositions and clopen sets ------------------------------------


def test_rieffel_examples():
    d = rieffel_decomposition(ROT, BASIS.parse("3 + 2*s"))
    assert (d.r1, d.r2, d.gamma) == (F(5), F(2), BASIS.parse("-1 + s"))
    assert d.gamma_combination == (-1, 1)
    d = rieffel_decomposition(ROT, BASIS.parse("s/3"))
    assert (d.r1, d.r2, d.gamma) == (F(1, 3), F(1, 3), BASIS.parse("-1 + s"))
    d = rieffel_decomposition(ROT, BASIS.rational(F(7, 2)))
    assert (d.r1, d.r2, d.gamma) == (F(7, 2), F(0), BASIS.zero())


def test_rieffel_rejects_minimal_times():
    with pytest.raises(DomainError):
        rieffel_decomposition(ROT, BASIS["u"])
    flow = SuspensionFlow(CircleRotation(BASIS["s"]), Constant(BASIS.rational(2)))
    with pytest.raises(DomainError):
        rieffel_decomposition(flow, BASIS.one())


@given(lattice)
def test_rieffel_recombines(t):
    assume(t)
    d = rieffel_decomposition(ROT, t)
    assert d.recombine() == t
    if d.gamma:
        assert d.gamma.sign() > 0 and (d.gamma - 1).sign() < 0
        assert suspension_eigen_group(ROT).group.contains(d.gamma)


def _greedy_oracle(gamma: F, radices):
    # independent recomputation: expand gamma in the mixed radix and count
    # cylinders level by level
    digits, rest, scale = [], gamma, F(1)
    for r in radices:
        scale /= r
        a = int(rest // scale)
        digits.append(a)
        rest -= a * scale
        if rest == 0:
            break
    return digits, rest


def test_clopen_examples():
    half = clopen_realization(ODO_BASE, F(1, 2))
    assert len(half) == 1 and half[0].measure == F(1, 2) and len(half[0].word) == 1
    five = clopen_realization(ODO_BASE, F(5, 12))
    assert sum(c.measure for c in five) == F(5, 12)
    digits, rest = _greedy_oracle(F(5, 12), [2, 2, 3])
    assert rest == 0
    assert [sum(1 for c in five if len(c.word) == k + 1) for k in range(3)] == digits
    assert clopen_realization(ODO_BASE, F(0)) == []


def test_clopen_rejects_unreachable_denominators():
    with pytest.raises(DomainError, match="attainable"):
        clopen_realization(ODO_BASE, F(1, 5))


@given(st.integers(0, 12 * 27), st.integers(0, 3))
def test_clopen_sets_are_disjoint_and_exact(num, k):
    gamma = F(num, 12 * 27)
    if gamma > 1:
        return
    cyl = clopen_realization(ODO_BASE, gamma)
    assert sum((c.measure for c in cyl), F(0)) == gamma
    for i, a in enumerate(cyl):
        assert a.measure == ODO_BASE.cylinder_measure(a.word)
        for b in cyl[i + 1:]:
            n = min(len(a.word), len(b.word))
            assert a.word[:n] != b.word[:n]


# --- trace images --------------------------------------------------------------


def test_lambdak_rotation_equality():
    im = lambdaK_trace_image(ROT)
    assert im.contained and im.equals_trace_range()


def test_lambdak_denjoy_strict():
    flow = SuspensionFlow(Denjoy(BASIS["s"], [BASIS.zero(), BASIS["u"]]), ONE)
    im = lambdaK_trace_image(flow)
    assert im.contained and not im.equals_trace_range()
    assert im.missing_from_image() == [BASIS["u"]]
    assert im.trace_range.membership(BASIS.zero()) is not None


def test_lambdak_rescaled_ceiling_lands_in_trace_range():
    flow = SuspensionFlow(CircleRotation(BASIS["s"]), Constant(BASIS.parse("1 + s")))
    im = lambdaK_trace_image(flow)
    assert im.contained and im.equals_trace_range()


def test_tau_left_inverse():
    for flow in (ROT, SuspensionFlow(CircleRotation(BASIS["s"]), Constant(BASIS.parse("1 + s"))),
                 SuspensionFlow(ODO_BASE, Constant(BASIS.rational(F(3, 2))))):
        eg = suspension_eigen_group(flow)
        tau = flow.mean_ceiling()
        for lam in eg.group.generators:
            assert tau_mu_f(flow, tau * lam) == lam


def test_strong_orbit_equivalence_example(B):
    d1 = SuspensionFlow(Denjoy(B["s"], [B.zero(), B["u"]]), Constant(B.one()))
    d2 = SuspensionFlow(Denjoy(B["u"], [B.zero(), B["s"]]), Constant(B.one()))
    t1, t2 = d1.base.trace_range(), d2.base.trace_range()
    assert all(t2.membership(g) is not None for g in t1.generators)
    assert all(t1.membership(g) is not None for g in t2.generators)
    assert suspension_eigen_group(d1).group.contains(B["s"])
    assert not suspension_eigen_group(d2).group.contains(B["s"])


# --- eigenvectors and Schwartzman positivity ----------------------------------


def _samples(flow, n, seed=0):
    rng = np.random.default_rng(seed)
    return [(flow.point(float(rng.random()), float(rng.random())), float(rng.uniform(-5, 5))) for _ in range(n)]


def test_height_character_residual():
    res = eigenvector_residual(ROT, BASIS.one(), lambda x: 1.0, _samples(ROT, 10000))
    assert res <= 1e-9


def test_rotation_character_residual():
    lam = BASIS["s"]
    res = eigenvector_residual(ROT, lam, base_character(ROT, lam), _samples(ROT, 2000))
    assert res <= 1e-9


def test_non_eigenvalue_residual_is_large():
    res = eigenvector_residual(ROT, BASIS.rational(F(1, 2)), lambda x: 1.0, _samples(ROT, 200))
    assert res >= 0.1


def test_schwartzman(B):
    assert not schwartzman_positive(ROT, BASIS.zero()).positive
    assert schwartzman_positive(ROT, BASIS["s"]).positive
    flow = SuspensionFlow(two_measure_system(B), DeclaredFunction("xi", lower_bound=1.0))
    res = schwartzman_positive(flow, B.one())
    assert res.per_measure == {"mu0": True, "mu1": True} and res.positive
    assert res.values["mu1"] == B.rational(3)
    assert not schwartzman_positive(ROT, BASIS.parse("-s")).positive
