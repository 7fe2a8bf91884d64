import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minflow import suspension
from minflow.basesys import CircleRotation, Denjoy, DenjoyState, Odometer, Point, TorusTranslation, UnsupportedError
from minflow.functions import CohomologousToConstant, Constant, CylinderLocallyConstant, TrigPoly
from minflow.suspension import (
    FlowBudgetError,
    SuspensionFlow,
    SuspensionPoint,
    TimeMap,
    cocycle_alpha,
    point_circle,
    torus_chart,
)

from conftest import make_basis

BASIS = make_basis()
ROT = CircleRotation(BASIS["s"])
ODO = Odometer([2, 2, 3], BASIS)
WAVY = SuspensionFlow(ROT, TrigPoly.make(2, [(1, F(1, 2), F(1, 3)), (2, 0, F(1, 4))]))
STEPPED = SuspensionFlow(ODO, CylinderLocallyConstant.make(2, {(0, 0): 1, (0, 1): 2, (1, 0): F(1, 2), (1, 1): 3}))
STANDARD = SuspensionFlow(ROT, Constant(BASIS.one()))
SLOW = SuspensionFlow(ROT, Constant(BASIS.parse("1 + s")))

circle = st.floats(0, 1, exclude_max=True)
ints = st.integers(-40, 40)


def _direct_alpha(flow, x, n):
    if n >= 0:
        return sum(flow.f(flow.base.step(x, i)) for i in range(n))
    return -sum(flow.f(flow.base.step(x, -i)) for i in range(1, -n + 1))


@given(circle, ints)
def test_closed_form_alpha_matches_direct_sum(x, n):
    assert math.isclose(cocycle_alpha(WAVY, x, n), _direct_alpha(WAVY, x, n), abs_tol=1e-9)


@given(circle, ints, ints)
def test_cocycle_identity_trig(x, m, n):
    lhs = cocycle_alpha(WAVY, x, m + n)
    rhs = cocycle_alpha(WAVY, x, m) + cocycle_alpha(WAVY, ROT.step(x, m), n)
    assert math.isclose(lhs, rhs, abs_tol=1e-9)


@given(st.lists(st.integers(0, 1), max_size=6), st.integers(-60, 60), st.integers(-60, 60))
def test_cocycle_identity_cylinder_is_exact(digits, m, n):
    x = ODO.make_state(digits)
    lhs = cocycle_alpha(STEPPED, x, m + n)
    rhs = cocycle_alpha(STEPPED, x, m) + cocycle_alpha(STEPPED, ODO.step(x, m), n)
    assert isinstance(lhs, F) or lhs == 0
    assert lhs == rhs
    if m + n >= 0:
        assert lhs == sum((STEPPED.ceiling.value_at(ODO, ODO.step(x, i)) for i in range(m + n)), F(0))


def test_alpha_zero_and_constant(B):
    assert cocycle_alpha(WAVY, 0.3, 0) == 0
    assert cocycle_alpha(SLOW, 0.3, 4) == SLOW.ceiling.value * 4
    assert cocycle_alpha(SLOW, 0.3, -3) == SLOW.ceiling.value * -3


def test_cohomologous_alpha_telescopes():
    g = lambda x: math.sin(2 * math.pi * x)
    f = CohomologousToConstant(BASIS.rational(2), g)
    flow = SuspensionFlow(ROT, f)
    assert math.isclose(cocycle_alpha(flow, 0.1, 25), _direct_alpha(flow, 0.1, 25), abs_tol=1e-9)


def test_negative_alpha_convention():
    # alpha(x, -1) = -f(S^-1 x)
    x = 0.41
    assert math.isclose(cocycle_alpha(WAVY, x, -1), -WAVY.f(ROT.step(x, -1)), abs_tol=1e-12)


def _same_point(flow, p, q, tol=1e-7):
    if hasattr(flow.base, "distance"):
        try:
            d = flow.base.distance(p.base, q.base)
        except UnsupportedError:
            d = 0.0
    return d < tol and abs(p.height - q.height) < tol


@pytest.mark.parametrize("flow", [WAVY, STANDARD, SLOW], ids=["trig", "standard", "constant"])
@settings(deadline=None, max_examples=60)
@given(x=circle, h=st.floats(0, 1), s=st.floats(-30, 30), t=st.floats(-30, 30))
def test_flow_additivity(flow, x, h, s, t):
    p = flow.point(x, h * flow.f(x) * 0.999)
    a = flow.flow(flow.flow(p, s), t)
    b = flow.flow(p, s + t)
    assert _same_point(flow, a, b, 1e-6)


@settings(deadline=None, max_examples=40)
@given(st.lists(st.integers(0, 1), max_size=5), st.floats(0, 1), st.floats(-20, 20), st.floats(-20, 20))
def test_flow_additivity_odometer(digits, h, s, t):
    x = ODO.make_state(digits)
    p = STEPPED.point(x, h * STEPPED.f(x) * 0.999)
    a = STEPPED.flow(STEPPED.flow(p, s), t)
    b = STEPPED.flow(p, s + t)
    assert a.base == b.base and abs(a.height - b.height) < 1e-9


@settings(deadline=None)
@given(circle, st.floats(-100, 100))
def test_normalization(x, t):
    q = WAVY.flow(WAVY.point(x, 0.0), t)
    assert 0 <= q.height < WAVY.f(q.base)


def test_identity_and_unit_time():
    p = STANDARD.point(0.3, 0.25)
    assert STANDARD.flow(p, 0.0) == p
    q = STANDARD.flow(p, 1.0)
    assert math.isclose(q.base, ROT.step(0.3, 1)) and math.isclose(q.height, 0.25)


def test_time_map_composition():
    T = TimeMap(WAVY, 0.7)
    U = T.compose(TimeMap(WAVY, 1.1))
    p = WAVY.point(0.2, 0.1)
    assert _same_point(WAVY, U(p), T(TimeMap(WAVY, 1.1)(p)))
    assert len(T.orbit(p, 5)) == 5


def test_positivity_required():
    with pytest.raises(ValueError):
        SuspensionFlow(ROT, TrigPoly.make(1, [(1, 2, 0)]))
    with pytest.raises(ValueError):
        SuspensionFlow(ROT, Constant(BASIS.parse("1 - s")))


def test_torus_chart_conjugates_time_map():
    s = float(BASIS["s"])
    for t in (0.0, 1.0, 2.37, -4.2):
        for x, h in ((0.1, 0.2), (0.8, 0.95)):
            p = STANDARD.point(x, h)
            a = np.array(torus_chart(STANDARD, STANDARD.flow(p, t)))
            b = (np.array(torus_chart(STANDARD, p)) + [s * t, t]) % 1.0
            d = np.abs(a - b)
            assert np.all(np.minimum(d, 1 - d) < 1e-9)
    with pytest.raises(UnsupportedError):
        torus_chart(WAVY, WAVY.point(0.1, 0.1))


def test_point_suspension_is_a_circle(B):
    flow = SuspensionFlow(Point(B), Constant(B.one()))
    p = flow.point(None, 0.25)
    assert math.isclose(point_circle(flow, flow.flow(p, 2.5)), 0.75)


def test_denjoy_and_torus_alpha():
    den = Denjoy(BASIS["s"], [BASIS.zero(), BASIS["u"]])
    flow = SuspensionFlow(den, TrigPoly.make(2, [(1, 1, 0)]))
    x = DenjoyState(0.3)
    assert math.isclose(cocycle_alpha(flow, x, 9), sum(flow.f(den.step(x, i)) for i in range(9)), abs_tol=1e-9)
    tor = TorusTranslation(BASIS["s"], BASIS["u"])
    tflow = SuspensionFlow(tor, TrigPoly.make(3, [((1, 1), 1, 1)], dim=2))
    z = (0.2, 0.7)
    assert math.isclose(cocycle_alpha(tflow, z, 6), sum(tflow.f(tor.step(z, i)) for i in range(6)), abs_tol=1e-9)


def test_wrap_budget(monkeypatch):
    monkeypatch.setattr(suspension, "MAX_WRAPS", 8)
    with pytest.raises(FlowBudgetError) as e:
        WAVY.flow(WAVY.point(0.1, 0.0), 1000.0)
    assert e.value.partial_n > 0
