"""Numerical evidence: orbit coverage, Weyl-sum eigenvalue detection,
Birkhoff estimates of asymptotic cycles, and brute-force oracles.

Nothing here feeds the exact decider; these routines exist to check it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .basesys import CircleRotation, Denjoy, Odometer, OdometerCharacter, Point, UnsupportedError
from .functions import Constant, TrigPoly
from .suspension import SuspensionFlow, SuspensionPoint, cocycle_alpha, flow as flow_map, torus_chart

DEFAULT_EIGEN_POSITIVE = 0.5
DEFAULT_EIGEN_NEGATIVE = 0.1


def default_checkpoints(N: int, count: int = 8) -> list[int]:
    pts = sorted({max(1, int(round(N ** (k / count)))) for k in range(1, count + 1)} | {N})
    return pts


@dataclass
class CoverageReport:
    grid: tuple[int, int]
    steps: int
    fraction: float
    histogram: np.ndarray = field(repr=False)
    curve: list[tuple[int, float]]


def _chart(flow: SuspensionFlow, p: SuspensionPoint) -> tuple[float, float]:
    return flow.base.chart(p.base), p.height / flow.f(p.base)


def orbit_coverage(flow: SuspensionFlow, t: float, start: SuspensionPoint, N: int,
                   grid: tuple[int, int] = (64, 64), checkpoints: Optional[Sequence[int]] = None,
                   ) -> CoverageReport:
    """Fraction of grid cells in the (base chart, normalized height) square
    visited by ``start, T^t start, ..., T^((N-1)t) start``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if not isinstance(flow.base, (CircleRotation, Denjoy, Odometer, Point)):
        raise UnsupportedError(f"coverage chart unavailable for {flow.base.kind}")
    g1, g2 = grid
    cps = sorted(set(checkpoints)) if checkpoints is not None else default_checkpoints(N)
    hist = np.zeros((g1, g2), dtype=np.int64)
    curve = []
    visited = 0
    p = start
    ci = 0
    for n in range(1, N + 1):
        a, b = _chart(flow, p)
        i = min(int(a * g1), g1 - 1)
        j = min(int(b * g2), g2 - 1)
        if hist[i, j] == 0:
            visited += 1
        hist[i, j] += 1
        while ci < len(cps) and cps[ci] == n:
            curve.append((n, visited / (g1 * g2)))
            ci += 1
        if n < N:
            p = flow_map(flow, p, t)
    return CoverageReport((g1, g2), N, visited / (g1 * g2), hist, curve)


@dataclass
class DetectorReport:
    lam: float
    family: str
    curve: list[tuple[int, float]]
    verdict: str

    @property
    def final(self) -> float:
        return self.curve[-1][1]


def _family_matrix(system, tests, orbit) -> np.ndarray:
    rows = []
    for g in tests:
        if hasattr(g, "batch"):
            vals = g.batch(orbit)
        elif isinstance(orbit, np.ndarray):
            vals = g(orbit)
        else:
            vals = np.array([g(x) for x in orbit], dtype=complex)
        rows.append(np.broadcast_to(np.asarray(vals, dtype=complex), (len(orbit),)))
    return np.array(rows)


class DetectorCache:
    """Reuses one base orbit, its cocycle values and test-function values
    across many candidate eigenvalues."""

    def __init__(self, flow: SuspensionFlow, start, N: int, tests: Sequence[Callable], family: str = "custom"):
        if not tests:
            raise ValueError("empty test family")
        if not flow.base.uniquely_ergodic:
            raise UnsupportedError("the Weyl detector needs a uniquely ergodic base")
        self.flow = flow
        self.N = N
        self.family = family
        orbit = flow.base.orbit(start, N)
        fvals = flow.ceiling.evaluate_batch(flow.base, orbit)
        # alpha(x, n) for n = 0..N-1
        self.alpha = np.concatenate([[0.0], np.cumsum(fvals)[:-1]])
        self._fourier = None
        self.conj_tests = None
        if all(isinstance(g, OdometerCharacter) for g in tests) and len({(id(g.system), g.d) for g in tests}) == 1:
            # bin the phases by cylinder and take one FFT instead of
            # materializing a (tests x N) matrix
            g0 = tests[0]
            self._fourier = (g0.system.position_array(orbit, g0.d), g0.P, np.array([g.j for g in tests]))
        else:
            self.conj_tests = np.conj(_family_matrix(flow.base, tests, orbit))

    def _magnitudes(self, phase: np.ndarray, cps: Sequence[int]) -> list[float]:
        if self._fourier is None:
            partial = np.cumsum(self.conj_tests * phase[None, :], axis=1)
            return [float(np.max(np.abs(partial[:, n - 1])) / n) for n in cps]
        pos, P, js = self._fourier
        out = []
        for n in cps:
            w = np.bincount(pos[:n], weights=phase[:n].real, minlength=P) \
                + 1j * np.bincount(pos[:n], weights=phase[:n].imag, minlength=P)
            out.append(float(np.max(np.abs(np.fft.fft(w)[js])) / n))
        return out

    def detect(self, lam: float, checkpoints: Optional[Sequence[int]] = None,
               positive: float = DEFAULT_EIGEN_POSITIVE, negative: float = DEFAULT_EIGEN_NEGATIVE,
               ) -> DetectorReport:
        phase = np.exp(2j * np.pi * lam * self.alpha)
        cps = sorted(set(checkpoints)) if checkpoints is not None else default_checkpoints(self.N)
        curve = list(zip(cps, self._magnitudes(phase, cps)))
        final = curve[-1][1]
        if final >= positive:
            verdict = "eigen-positive"
        elif final <= negative:
            verdict = "eigen-negative"
        else:
            verdict = "inconclusive"
        return DetectorReport(float(lam), self.family, curve, verdict)


def weyl_detector(flow: SuspensionFlow, lam: float, start, N: int, tests: Sequence[Callable],
                  checkpoints: Optional[Sequence[int]] = None,
                  positive: float = DEFAULT_EIGEN_POSITIVE, negative: float = DEFAULT_EIGEN_NEGATIVE,
                  family: str = "custom") -> DetectorReport:
    """``D_N = max_g |(1/N) sum_{n<N} exp(2 pi i lam alpha_f(x, n)) conj(g(S^n x))|``.

    If ``lam`` is an eigenvalue with eigenvector restricted to the base
    equal to ``g``, every summand has the same value and ``D_N = 1``.
    """
    cache = DetectorCache(flow, start, N, tests, family)
    return cache.detect(lam, checkpoints, positive, negative)


def character_tests(flow: SuspensionFlow, order: int) -> list[Callable]:
    return [chi for _, chi in flow.base.character_family(order)]


def asymptotic_cycle_estimate(flow: SuspensionFlow, lam: float, start, N: int) -> float:
    """Birkhoff estimate ``(lam/N) * sum_{n<N} f(S^n x)`` of ``lam * tau_mu(f)``."""
    if lam == 0:
        return 0.0
    if isinstance(flow.ceiling, Constant):
        return lam * flow.ceiling.numeric()
    if not flow.base.uniquely_ergodic:
        raise UnsupportedError("Birkhoff estimate needs a uniquely ergodic base")
    fvals = flow.ceiling.evaluate_batch(flow.base, flow.base.orbit(start, N))
    return lam * float(math.fsum(fvals)) / N


def membership_bruteforce_oracle(generators: Sequence[float], x: float, num_bound: int, den_bound: int,
                                 eps: float) -> Optional[tuple[Fraction, ...]]:
    """Exhaustive search over ``x ~ sum c_i g_i`` with each ``c_i = p/q``,
    ``|p| <= num_bound``, ``1 <= q <= den_bound``.  Coefficients are scanned
    lexicographically, each in order of increasing height ``|p| + q``; the
    first combination within ``eps`` is returned."""
    if num_bound < 1 or den_bound < 1 or eps <= 0:
        raise ValueError("bounds must be >= 1 and eps > 0")
    values = sorted({Fraction(p, q) for p in range(-num_bound, num_bound + 1) for q in range(1, den_bound + 1)},
                    key=lambda c: (abs(c.numerator) + c.denominator, c))
    g = np.asarray(generators, dtype=float)
    k = len(g)
    if k == 0:
        return () if abs(x) <= eps else None
    vals = np.array([float(v) for v in values])
    # vectorize over the last generator
    for head in itertools.product(range(len(values)), repeat=k - 1):
        partial = sum(vals[i] * g[j] for j, i in enumerate(head)) if head else 0.0
        resid = np.abs(partial + vals * g[-1] - x)
        hits = np.nonzero(resid <= eps)[0]
        if hits.size:
            return tuple(values[i] for i in head) + (values[int(hits[0])],)
    return None


def torus_conjugacy_check(flow: SuspensionFlow, t: float, samples: int, seed: int = 0) -> float:
    """Max over random points of the circle distance between
    ``F(T^t p)`` and ``F(p) + (s*t, t)``."""
    if not isinstance(flow.base, CircleRotation):
        raise UnsupportedError("torus conjugacy needs a circle rotation base")
    rng = np.random.default_rng(seed)
    s = flow.base._sf
    worst = 0.0
    for _ in range(samples):
        p = SuspensionPoint(float(rng.random()), float(rng.random()))
        a = np.array(torus_chart(flow, flow_map(flow, p, t)))
        b = (np.array(torus_chart(flow, p)) + np.array([s * t, t])) % 1.0
        d = np.abs(a - b) % 1.0
        worst = max(worst, float(np.max(np.minimum(d, 1.0 - d))))
    return worst

