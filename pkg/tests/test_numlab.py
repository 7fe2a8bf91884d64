import math
from fractions import Fraction as F

import numpy as np
import pytest

from minflow.basesys import CircleRotation, Furstenberg, Odometer, TorusTranslation, UnsupportedError
from minflow.functions import Constant, CylinderLocallyConstant, TrigPoly
from minflow.numlab import (
    DetectorCache,
    asymptotic_cycle_estimate,
    character_tests,
    membership_bruteforce_oracle,
    orbit_coverage,
    torus_conjugacy_check,
    weyl_detector,
)
from minflow.qlinear import reciprocal
from minflow.suspension import SuspensionFlow

from conftest import make_basis

BASIS = make_basis()
ROT = CircleRotation(BASIS["s"])
STANDARD = SuspensionFlow(ROT, Constant(BASIS.one()))
S = math.sqrt(2)


def test_single_step_covers_one_cell():
    rep = orbit_coverage(STANDARD, 0.3, STANDARD.point(0.1, 0.2), 1)
    assert rep.fraction == 1 / (64 * 64)
    assert rep.histogram.sum() == 1


def test_coverage_curve_is_monotone():
    t = float(reciprocal(BASIS.parse("1 + s")))
    rep = orbit_coverage(STANDARD, t, STANDARD.point(0.1, 0.2), 5000, checkpoints=[10, 100, 1000, 5000])
    vals = [v for _, v in rep.curve]
    assert vals == sorted(vals) and 0 <= vals[-1] <= 1
    assert [n for n, _ in rep.curve] == [10, 100, 1000, 5000]


def test_coverage_is_deterministic():
    a = orbit_coverage(STANDARD, 0.577, STANDARD.point(0.4, 0.5), 3000)
    b = orbit_coverage(STANDARD, 0.577, STANDARD.point(0.4, 0.5), 3000)
    assert a.curve == b.curve and np.array_equal(a.histogram, b.histogram)


def test_coverage_unsupported_chart(B):
    flow = SuspensionFlow(TorusTranslation(B["s"], B["u"]), Constant(B.one()))
    with pytest.raises(UnsupportedError):
        orbit_coverage(flow, 0.5, flow.point((0.1, 0.2), 0.0), 10)


def test_detector_unit_eigenvalue():
    rep = weyl_detector(STANDARD, 1.0, 0.3, 1000, [lambda x: np.ones_like(x, dtype=complex)],
                        checkpoints=[1, 10, 100, 1000])
    assert all(abs(v - 1) < 1e-12 for _, v in rep.curve)
    assert rep.verdict == "eigen-positive"


def test_detector_rotation_number():
    rep = weyl_detector(STANDARD, S, 0.3, 10000, character_tests(STANDARD, 1))
    assert abs(rep.final - 1) < 1e-9


def test_detector_half_is_negative():
    rep = weyl_detector(STANDARD, 0.5, 0.3, 100000, character_tests(STANDARD, 8))
    assert rep.final <= 0.05 and rep.verdict == "eigen-negative"


def test_detector_thresholds_configurable():
    rep = weyl_detector(STANDARD, 0.5, 0.3, 1000, character_tests(STANDARD, 2), positive=1e-9, negative=0.0)
    assert rep.verdict == "eigen-positive"


def test_detector_needs_tests_and_unique_ergodicity(B):
    with pytest.raises(ValueError):
        weyl_detector(STANDARD, 1.0, 0.3, 10, [])
    fur = SuspensionFlow(Furstenberg(B["s"], 1), Constant(B.one()))
    with pytest.raises(UnsupportedError):
        weyl_detector(fur, 1.0, (0.1, 0.1), 10, [lambda z: 1.0])


def test_odometer_detector_uses_cylinder_characters(B):
    od = Odometer([2, 2, 3], B)
    flow = SuspensionFlow(od, Constant(B.one()))
    cache = DetectorCache(flow, od.make_state([1]), 5000, character_tests(flow, 3))
    assert cache.detect(5 / 12).verdict == "eigen-positive"
    assert cache.detect(1 / 7).verdict == "eigen-negative"
    # the binned FFT agrees with the direct sum
    direct = DetectorCache(flow, od.make_state([1]), 5000, [lambda x, c=c: c(x) for c in character_tests(flow, 2)])
    binned = DetectorCache(flow, od.make_state([1]), 5000, character_tests(flow, 2))
    for lam in (0.25, 0.3, 1 / 3):
        assert abs(direct.detect(lam).final - binned.detect(lam).final) < 1e-9


def test_asymptotic_cycle_constant_is_exact():
    assert asymptotic_cycle_estimate(STANDARD, 2.5, 0.1, 17) == 2.5
    assert asymptotic_cycle_estimate(STANDARD, 0.0, 0.1, 17) == 0.0


def test_asymptotic_cycle_trig():
    flow = SuspensionFlow(ROT, TrigPoly.make(2, [(1, F(1, 2), F(1, 3))]))
    assert abs(asymptotic_cycle_estimate(flow, 1.0, 0.3, 10**6) - 2) <= 1e-3


def test_asymptotic_cycle_cylinder(B):
    od = Odometer([2, 2, 3], B)
    flow = SuspensionFlow(od, CylinderLocallyConstant.make(1, {(0,): 1, (1,): 3}))
    assert abs(asymptotic_cycle_estimate(flow, 1.0, od.make_state([]), 1000) - 2) < 1e-12


def test_bruteforce_oracle_examples():
    assert membership_bruteforce_oracle([1.0, S], 1.5 + 2 * S, 10, 6, 1e-9) == (F(3, 2), F(2))
    assert membership_bruteforce_oracle([1.0, S], math.sqrt(3), 10, 6, 1e-9) is None
    assert membership_bruteforce_oracle([1.0, S], 0.0, 10, 6, 1e-9) == (F(0), F(0))
    with pytest.raises(ValueError):
        membership_bruteforce_oracle([1.0], 1.0, 0, 6, 1e-9)


def test_torus_conjugacy():
    assert torus_conjugacy_check(STANDARD, 0.0, 100) == 0.0
    assert torus_conjugacy_check(STANDARD, 1.0, 1000) <= 1e-9
    rng = np.random.default_rng(3)
    for i, t in enumerate(rng.uniform(-5, 5, size=5)):
        assert torus_conjugacy_check(STANDARD, float(t), 2000, seed=i) <= 1e-9
