"""Suspension flows over catalog base systems.

A point of the suspension with base ``S`` and ceiling ``f`` is stored in
its fundamental domain: a base state ``x`` and a height ``0 <= h < f(x)``.
Heights are floats; everything symbolic about the flow (its mean ceiling,
its eigenvalues) is computed exactly elsewhere from the ceiling's
description.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Union

import numpy as np

from .basesys import BaseSystem, CircleRotation, Denjoy, Odometer, Point, TorusTranslation, UnsupportedError
from .functions import (
    CohomologousToConstant,
    Constant,
    CylinderLocallyConstant,
    DeclaredFunction,
    TrigPoly,
)
from .qlinear import ExactReal

CeilingFunction = Union[Constant, TrigPoly, CylinderLocallyConstant, CohomologousToConstant, DeclaredFunction]

# wrap searches never look further than this many base steps
MAX_WRAPS = 10**9


class FlowBudgetError(RuntimeError):
    def __init__(self, message: str, partial_n: int):
        super().__init__(f"{message} (reached n={partial_n})")
        self.partial_n = partial_n


@dataclass(frozen=True)
class SuspensionPoint:
    base: Any
    height: float


class SuspensionFlow:
    """Suspension of ``base`` under the strictly positive ceiling ``ceiling``."""

    def __init__(self, base: BaseSystem, ceiling: CeilingFunction, *, check_positive: bool = True):
        if check_positive and not ceiling.is_strictly_positive(base):
            raise ValueError(f"ceiling {ceiling!r} is not certified strictly positive")
        if isinstance(ceiling, Constant) and ceiling.value.basis is not base.basis:
            raise ValueError("constant ceiling over a different basis than the base system")
        self.base = base
        self.ceiling = ceiling
        self._const = ceiling.numeric() if isinstance(ceiling, Constant) else None

    def __repr__(self):
        return f"SuspensionFlow({self.base.kind}, {self.ceiling!r})"

    @property
    def is_standard(self) -> bool:
        return isinstance(self.ceiling, Constant) and self.ceiling.value == 1

    def mean_ceiling(self, measure_id: Optional[str] = None) -> ExactReal:
        """``tau_mu(f)``: the exact integral of the ceiling."""
        mid = measure_id if measure_id is not None else self.base.measure_ids()[0]
        return self.base.integrate(mid, self.ceiling)

    def mean_ceilings(self) -> dict[str, ExactReal]:
        return {m: self.base.integrate(m, self.ceiling) for m in self.base.measure_ids()}

    def f(self, x) -> float:
        if self._const is not None:
            return self._const
        return self.ceiling.evaluate(self.base, x)

    def point(self, x, height: float = 0.0) -> SuspensionPoint:
        """Normalize ``[x, height]`` into the fundamental domain."""
        return self.flow(SuspensionPoint(x, 0.0), height)

    def alpha(self, x, n: int):
        return cocycle_alpha(self, x, n)

    def flow(self, p: SuspensionPoint, t: float) -> SuspensionPoint:
        return flow(self, p, t)


def _alpha_exact(flow: SuspensionFlow, x, n: int):
    f = flow.ceiling
    if isinstance(f, Constant):
        return f.value * n
    if isinstance(f, CylinderLocallyConstant) and isinstance(flow.base, Odometer):
        od = flow.base
        P = od.period(f.depth)
        q, r = divmod(n, P)
        total = Fraction(0)
        if q:
            # a full period visits each depth-d cylinder once
            total += q * P * od.integrate("haar", f).rational_part
        if r:
            y = od.step(x, q * P)
            for _ in range(r):
                total += f.value_at(od, y)
                y = od.step(y, 1)
        return total
    return None


def cocycle_alpha(flow: SuspensionFlow, x, n: int):
    """``alpha_f(x, n)``: the sum of ``f(S^i x)`` for ``0 <= i < n``, zero for
    ``n = 0``, and minus the sum of ``f(S^-i x)`` for ``1 <= i <= -n``.

    Exact (ExactReal or Fraction) for constant ceilings and for cylinder
    ceilings over odometers; a float otherwise.
    """
    if n == 0:
        return 0
    if n < 0:
        # alpha(x, n) = -alpha(S^n x, -n)
        y = flow.base.step(x, n)
        v = cocycle_alpha(flow, y, -n)
        return -v
    exact = _alpha_exact(flow, x, n)
    if exact is not None:
        return exact
    f, base = flow.ceiling, flow.base
    if isinstance(f, TrigPoly):
        if isinstance(base, CircleRotation):
            return f.orbit_sum(x, base.shift, n)
        if isinstance(base, Denjoy):
            return f.orbit_sum(x.x, base.factor_system.shift, n)
        if isinstance(base, TorusTranslation):
            return f.orbit_sum(x, base.shift, n)
    if isinstance(f, CohomologousToConstant):
        # telescoping transfer
        y = base.step(x, n)
        return n * float(f.value) + f.transfer(y) - f.transfer(x)
    return float(np.sum(f.evaluate_batch(base, base.orbit(x, n))))


def _alpha_float(flow: SuspensionFlow, x, n: int) -> float:
    return float(cocycle_alpha(flow, x, n))


def flow(flow: SuspensionFlow, p: SuspensionPoint, t: float) -> SuspensionPoint:
    """``T^t [x, s] = [x, s + t]``, returned in canonical form: the unique n
    with ``alpha(x, n) <= s + t < alpha(x, n + 1)``, base ``S^n x`` and height
    ``s + t - alpha(x, n)``."""
    u = p.height + t
    x = p.base
    c = flow._const
    if c is not None:
        n = math.floor(u / c)
        h = u - n * c
        # guard rounding at the top of the fiber
        if h >= c:
            n += 1
            h -= c
        elif h < 0:
            n -= 1
            h += c
        return SuspensionPoint(flow.base.step(x, n), max(h, 0.0))
    n = _locate(flow, x, u)
    y = flow.base.step(x, n)
    h = u - _alpha_float(flow, x, n)
    fy = flow.f(y)
    if h >= fy:
        y, h = flow.base.step(y, 1), h - fy
    elif h < 0:
        y = flow.base.step(y, -1)
        h += flow.f(y)
    return SuspensionPoint(y, max(h, 0.0))


def _locate(flow: SuspensionFlow, x, u: float) -> int:
    """Exponential then binary search for n with alpha(x,n) <= u < alpha(x,n+1)."""
    A = lambda n: _alpha_float(flow, x, n)
    if u >= 0:
        lo, hi = 0, 1
        while A(hi) <= u:
            lo, hi = hi, hi * 2
            if hi > MAX_WRAPS:
                raise FlowBudgetError("wrap search exceeded its budget", lo)
    else:
        lo, hi = -1, 0
        while A(lo) > u:
            hi, lo = lo, lo * 2
            if -lo > MAX_WRAPS:
                raise FlowBudgetError("wrap search exceeded its budget", hi)
    # invariant: A(lo) <= u < A(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if A(mid) <= u:
            lo = mid
        else:
            hi = mid
    return lo


class TimeMap:
    """The discrete system ``(Y, T^t)``."""

    def __init__(self, flow: SuspensionFlow, t: float):
        self.flow = flow
        self.t = float(t)

    def __call__(self, p: SuspensionPoint) -> SuspensionPoint:
        return flow(self.flow, p, self.t)

    def step(self, p: SuspensionPoint, n: int = 1) -> SuspensionPoint:
        return flow(self.flow, p, n * self.t)

    def orbit(self, p: SuspensionPoint, N: int) -> list[SuspensionPoint]:
        out = []
        for _ in range(N):
            out.append(p)
            p = flow(self.flow, p, self.t)
        return out

    def compose(self, other: "TimeMap") -> "TimeMap":
        if other.flow is not self.flow:
            raise ValueError("time maps of different flows")
        return TimeMap(self.flow, self.t + other.t)


def time_map(flow: SuspensionFlow, t: float) -> TimeMap:
    return TimeMap(flow, t)


def torus_chart(flow: SuspensionFlow, p: SuspensionPoint) -> tuple[float, float]:
    """``[z, r] -> (z + s*r, r)`` mod 1: the conjugacy of the standard
    suspension of the rotation by ``s`` with the 2-torus, which carries
    ``T^t`` to the translation by ``(s*t, t)``."""
    if not (isinstance(flow.base, CircleRotation) and flow.is_standard):
        raise UnsupportedError("torus chart needs the standard suspension of a circle rotation")
    s = flow.base._sf
    return ((p.base + s * p.height) % 1.0, p.height % 1.0)


def point_circle(flow: SuspensionFlow, p: SuspensionPoint) -> float:
    """The standard suspension of a point is the circle; this is its coordinate."""
    if not isinstance(flow.base, Point):
        raise UnsupportedError("circle coordinate needs a point base")
    return p.height / flow._const if flow._const else p.height
