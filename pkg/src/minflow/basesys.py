"""Catalog of minimal base systems.

Each system carries its dynamics (numeric where the state space is a
continuum, exact for odometers), its invariant-measure integrators, and the
spectral data the rest of the package consumes: the lift of the discrete
eigenvalue group to R (``eigen_group_lift``) and the range of the trace on
K0 of the crossed product (``trace_range``).

Circle coordinates are additive, in [0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional, Sequence

import numpy as np

from .functions import (
    CohomologousToConstant,
    Constant,
    CylinderLocallyConstant,
    DeclaredFunction,
    InadmissibleFunctionError,
    TrigPoly,
)
from .qlinear import ExactReal, FgSubgroup, GeneratorBasis, QSubspace, as_fraction
from .verdicts import Minimal, NotMinimal

TWO_PI = 2 * math.pi


class UnknownGroupError(LookupError):
    """Spectral data for this system has to be declared."""


class UnsupportedError(NotImplementedError):
    pass


# --------------------------------------------------------------------------
# Measures
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MeasureIntegrator:
    """Exact integration against one invariant probability measure."""

    measure_id: str
    system: "BaseSystem" = field(repr=False, compare=False)

    def integrate(self, f) -> ExactReal:
        return self.system._integrate(self.measure_id, f)


# --------------------------------------------------------------------------
# Base class
# --------------------------------------------------------------------------


class BaseSystem:
    kind = "abstract"
    trig_dim: Optional[int] = None
    uniquely_ergodic = True

    basis: GeneratorBasis

    def step(self, x, n: int = 1):
        raise NotImplementedError

    def orbit(self, x, N: int):
        """States ``x, Sx, ..., S^(N-1)x`` (list, or array for circle/torus)."""
        out = []
        for _ in range(N):
            out.append(x)
            x = self.step(x, 1)
        return out

    def measures(self) -> list[MeasureIntegrator]:
        return [MeasureIntegrator(m, self) for m in self.measure_ids()]

    def measure_ids(self) -> list[str]:
        return ["haar"]

    def integrate(self, measure_id: str, f) -> ExactReal:
        if measure_id not in self.measure_ids():
            raise KeyError(f"{self.kind} has no measure {measure_id!r}; has {self.measure_ids()}")
        return self._integrate(measure_id, f)

    def _integrate(self, measure_id: str, f) -> ExactReal:
        if isinstance(f, Constant):
            return f.value
        if isinstance(f, CohomologousToConstant):
            return f.value
        if isinstance(f, TrigPoly) and self.trig_dim == f.dim:
            return self.basis.rational(f.constant)
        raise InadmissibleFunctionError(
            f"{self.kind} integrates {self.admissible_class()}, not {type(f).__name__}"
        )

    def admissible_class(self) -> str:
        return "constants"

    def eigen_group_lift(self) -> FgSubgroup:
        raise UnknownGroupError(f"{self.kind}: eigenvalues must be declared")

    def trace_range(self) -> FgSubgroup:
        raise UnknownGroupError(f"{self.kind}: trace range must be declared")

    def is_minimal(self):
        return Minimal(reason=f"{self.kind} systems are minimal")

    # numerics
    def coordinates(self, x):
        raise UnsupportedError(f"{self.kind} has no continuous coordinates")

    def coordinate_array(self, batch) -> np.ndarray:
        return np.array([self.coordinates(x) for x in batch], dtype=float)

    def chart(self, x) -> float:
        """A [0, 1) coordinate used to bin states for coverage probes."""
        raise UnsupportedError(f"{self.kind} is not chartable")

    def random_state(self, rng: np.random.Generator):
        raise UnsupportedError(f"{self.kind} has no sampler")

    def distance(self, x, y) -> float:
        raise UnsupportedError(f"{self.kind} has no metric")

    def character(self, lam: ExactReal) -> Callable[[Any], complex]:
        """Continuous ``chi`` with ``chi(Sx) = exp(2 pi i lam) chi(x)``."""
        raise UnsupportedError(f"{self.kind} provides no eigenvectors")

    def character_family(self, order: int) -> list[tuple[ExactReal, Callable[[Any], complex]]]:
        raise UnsupportedError(f"{self.kind} provides no character family")

    def describe(self) -> dict:
        return {"kind": self.kind}


def _circle_dist(a, b) -> float:
    d = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)) % 1.0
    return float(np.max(np.minimum(d, 1.0 - d)))


# --------------------------------------------------------------------------
# Point
# --------------------------------------------------------------------------


class Point(BaseSystem):
    """The one-point system; its standard suspension is the circle."""

    kind = "point"

    def __init__(self, basis: GeneratorBasis):
        self.basis = basis

    def step(self, x=None, n: int = 1):
        return None

    def orbit(self, x, N):
        return [None] * N

    def eigen_group_lift(self) -> FgSubgroup:
        return FgSubgroup(self.basis, [self.basis.one()])

    def trace_range(self) -> FgSubgroup:
        return FgSubgroup(self.basis, [self.basis.one()])

    def chart(self, x) -> float:
        return 0.0

    def random_state(self, rng):
        return None

    def distance(self, x, y) -> float:
        return 0.0

    def character(self, lam):
        if not lam.is_rational() or lam.rational_part.denominator != 1:
            raise UnsupportedError(f"{lam} is not an eigenvalue of the point")
        return lambda x: 1.0 + 0j

    def character_family(self, order):
        return [(self.basis.one(), lambda x: 1.0 + 0j)]


# --------------------------------------------------------------------------
# Circle rotation and torus translation
# --------------------------------------------------------------------------


class CircleRotation(BaseSystem):
    kind = "rotation"
    trig_dim = 1

    def __init__(self, s: ExactReal):
        if s.is_rational():
            raise ValueError("rotation number must be irrational")
        self.s = s
        self.basis = s.basis
        self._sf = float(s)
        self.shift = self._sf % 1.0

    def step(self, x: float, n: int = 1) -> float:
        return (x + n * self._sf) % 1.0

    def orbit(self, x, N):
        # frac(x + n s) with the fractional shift to keep magnitudes small
        return (x + np.arange(N) * self.shift) % 1.0

    def admissible_class(self):
        return "trigonometric polynomials with rational coefficients"

    def coordinates(self, x):
        return float(x)

    def coordinate_array(self, batch):
        return np.asarray(batch, dtype=float)

    def chart(self, x) -> float:
        return float(x) % 1.0

    def random_state(self, rng):
        return float(rng.random())

    def distance(self, x, y):
        return _circle_dist(x, y)

    def eigen_group_lift(self) -> FgSubgroup:
        return FgSubgroup(self.basis, [self.basis.one(), self.s])

    def trace_range(self) -> FgSubgroup:
        return FgSubgroup(self.basis, [self.basis.one(), self.s])

    def character(self, lam):
        n = self.eigen_group_lift().membership(lam)
        if n is None:
            raise UnsupportedError(f"{lam} is not in Z + {self.s}Z")
        k = n[1]
        return lambda x: complex(math.cos(TWO_PI * k * x), math.sin(TWO_PI * k * x))

    def character_family(self, order):
        fam = []
        for k in range(-order, order + 1):
            fam.append((self.s * k, lambda x, k=k: np.exp(2j * np.pi * k * np.asarray(x))))
        return fam

    def describe(self):
        return {"kind": self.kind, "s": self.s.to_dict()}


class TorusTranslation(BaseSystem):
    kind = "torus"
    trig_dim = 2

    def __init__(self, s1: ExactReal, s2: ExactReal):
        if s1.basis is not s2.basis:
            raise ValueError("translation components over different bases")
        self.s1, self.s2 = s1, s2
        self.basis = s1.basis
        self._sf = np.array([float(s1), float(s2)])
        self.shift = self._sf % 1.0

    def step(self, x, n: int = 1):
        return tuple((np.asarray(x, dtype=float) + n * self._sf) % 1.0)

    def orbit(self, x, N):
        return (np.asarray(x, dtype=float)[None, :] + np.arange(N)[:, None] * self.shift) % 1.0

    def admissible_class(self):
        return "trigonometric polynomials in two variables with rational coefficients"

    def coordinates(self, x):
        return np.asarray(x, dtype=float)

    def coordinate_array(self, batch):
        return np.asarray(batch, dtype=float).reshape(-1, 2)

    def random_state(self, rng):
        return tuple(rng.random(2))

    def distance(self, x, y):
        return _circle_dist(x, y)

    def is_minimal(self):
        one = self.basis.one()
        rank = QSubspace(self.basis, [one, self.s1, self.s2]).rank
        if rank == 3:
            return Minimal(conditional_on=self.basis.independence_note,
                           reason="1, s1, s2 independent over Q")
        return NotMinimal(reason="1, s1, s2 are dependent over Q")

    def eigen_group_lift(self):
        return FgSubgroup(self.basis, [self.basis.one(), self.s1, self.s2])

    def trace_range(self):
        # Only the eigenvalue part of the trace range is claimed here.
        raise UnknownGroupError("torus: trace range must be declared")

    def character(self, lam):
        n = self.eigen_group_lift().membership(lam)
        if n is None:
            raise UnsupportedError(f"{lam} is not an eigenvalue lift")
        k1, k2 = n[1], n[2]
        return lambda x: complex(np.exp(2j * np.pi * (k1 * x[0] + k2 * x[1])))

    def character_family(self, order):
        fam = []
        for k1 in range(-order, order + 1):
            for k2 in range(-order, order + 1):
                lam = self.s1 * k1 + self.s2 * k2
                fam.append((lam, lambda x, k1=k1, k2=k2: np.exp(
                    2j * np.pi * (k1 * np.asarray(x)[..., 0] + k2 * np.asarray(x)[..., 1]))))
        return fam

    def describe(self):
        return {"kind": self.kind, "s1": self.s1.to_dict(), "s2": self.s2.to_dict()}


# --------------------------------------------------------------------------
# Odometer
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class OdometerState:
    """Explicit digits followed by a constant tail: all zeros (``tail=0``)
    or all maximal digits (``tail=-1``)."""

    digits: tuple[int, ...] = ()
    tail: int = 0


@dataclass(frozen=True)
class Cylinder:
    word: tuple[int, ...]
    measure: Fraction


class Odometer(BaseSystem):
    """Adding machine on prod {0..n_i - 1}, carry to the right.

    ``digits`` lists the first radices; ``repeat='last'`` repeats the final
    radix forever, ``repeat='cycle'`` cycles the list.  ``depth`` bounds the
    finitely generated truncations of the (infinitely generated) rational
    eigenvalue group.
    """

    kind = "odometer"

    def __init__(self, digits: Sequence[int], basis: GeneratorBasis, *, repeat: str = "last",
                 depth: int = 6):
        digits = tuple(int(d) for d in digits)
        if not digits:
            raise ValueError("odometer needs at least one radix")
        if any(d < 2 for d in digits):
            raise ValueError(f"odometer radices must be >= 2, got {digits}")
        if repeat not in ("last", "cycle"):
            raise ValueError("repeat must be 'last' or 'cycle'")
        self.digits = digits
        self.repeat = repeat
        self.depth = depth
        self.basis = basis
        self._pos_cache = None

    def radix(self, i: int) -> int:
        if i < len(self.digits):
            return self.digits[i]
        if self.repeat == "last":
            return self.digits[-1]
        return self.digits[i % len(self.digits)]

    def period(self, d: int) -> int:
        """n_1 * ... * n_d, the number of depth-d cylinders."""
        p = 1
        for i in range(d):
            p *= self.radix(i)
        return p

    def tail_digit(self, state: OdometerState, i: int) -> int:
        return 0 if state.tail == 0 else self.radix(i) - 1

    def digit(self, state: OdometerState, i: int) -> int:
        if i < len(state.digits):
            return state.digits[i]
        return self.tail_digit(state, i)

    def normalize(self, state: OdometerState) -> OdometerState:
        ds = list(state.digits)
        while ds and ds[-1] == self.tail_digit(state, len(ds) - 1):
            ds.pop()
        return OdometerState(tuple(ds), state.tail)

    def make_state(self, digits: Sequence[int], tail: int = 0) -> OdometerState:
        for i, d in enumerate(digits):
            if not 0 <= d < self.radix(i):
                raise ValueError(f"digit {d} out of range at position {i} (radix {self.radix(i)})")
        return self.normalize(OdometerState(tuple(digits), tail))

    def step(self, x: OdometerState, n: int = 1) -> OdometerState:
        if n == 0:
            return x
        ds = list(x.digits)
        tail = x.tail
        carry = n
        i = 0
        while carry:
            if i >= len(ds):
                if tail == 0 and carry == -1:
                    tail = -1
                    break
                if tail == -1 and carry == 1:
                    tail = 0
                    break
                ds.append(0 if tail == 0 else self.radix(i) - 1)
            v = ds[i] + carry
            r = self.radix(i)
            ds[i], carry = v % r, v // r
            i += 1
        return self.normalize(OdometerState(tuple(ds), tail))

    def word(self, x: OdometerState, d: int) -> tuple[int, ...]:
        return tuple(self.digit(x, i) for i in range(d))

    def position(self, x: OdometerState, d: int) -> int:
        """Mixed-radix value of the first d digits, in Z / (n_1...n_d)."""
        pos, scale = 0, 1
        for i in range(d):
            pos += self.digit(x, i) * scale
            scale *= self.radix(i)
        return pos

    def state_from_position(self, pos: int, d: int) -> OdometerState:
        ds = []
        for i in range(d):
            r = self.radix(i)
            ds.append(pos % r)
            pos //= r
        return self.normalize(OdometerState(tuple(ds), 0))

    def chart(self, x: OdometerState) -> float:
        # sum d_i / (n_1 ... n_{i+1}), truncated where terms drop below 2**-60
        total, scale, i = 0.0, 1, 0
        while scale < 2**60:
            scale *= self.radix(i)
            total += self.digit(x, i) / scale
            i += 1
        return min(total, math.nextafter(1.0, 0.0))

    def random_state(self, rng, depth: int = 24):
        return self.make_state([int(rng.integers(self.radix(i))) for i in range(depth)])

    def distance(self, x, y) -> float:
        i = 0
        while i < 64 and self.digit(x, i) == self.digit(y, i):
            i += 1
        return 0.0 if i == 64 else 1.0 / self.period(i + 1)

    def cylinders(self, d: int) -> list[Cylinder]:
        m = Fraction(1, self.period(d))
        return [Cylinder(self.word(self.state_from_position(p, d), d), m) for p in range(self.period(d))]

    def cylinder_measure(self, word: Sequence[int]) -> Fraction:
        return Fraction(1, self.period(len(word)))

    def admissible_class(self):
        return "functions constant on cylinders"

    def _integrate(self, measure_id, f):
        if isinstance(f, CylinderLocallyConstant):
            table = f.table
            if len(table) != self.period(f.depth):
                raise InadmissibleFunctionError(
                    f"cylinder function must give a value on all {self.period(f.depth)} depth-{f.depth} cylinders"
                )
            total = Fraction(0)
            for word, v in table.items():
                total += v * self.cylinder_measure(word)
            return self.basis.rational(total)
        return super()._integrate(measure_id, f)

    def group_generator(self, depth: Optional[int] = None) -> Fraction:
        return Fraction(1, self.period(self.depth if depth is None else depth))

    def eigen_group_lift(self, depth: Optional[int] = None) -> FgSubgroup:
        """Truncation ``Z * 1/(n_1...n_depth)`` of the rational eigenvalue group."""
        return FgSubgroup(self.basis, [self.basis.rational(self.group_generator(depth))])

    def trace_range(self, depth: Optional[int] = None) -> FgSubgroup:
        return self.eigen_group_lift(depth)

    def contains_rational(self, q: Fraction) -> bool:
        """Exact membership in the full union over all depths."""
        den = Fraction(q).denominator
        if self.repeat == "last":
            den //= math.gcd(den, self.period(len(self.digits)))
            unit = self.digits[-1]
        else:
            unit = self.period(len(self.digits))
        while den > 1:
            g = math.gcd(den, unit)
            if g == 1:
                return False
            den //= g
        return True

    def depth_for(self, q: Fraction) -> Optional[int]:
        """Least d with q in Z * 1/(n_1...n_d), or None."""
        if not self.contains_rational(q):
            return None
        den = Fraction(q).denominator
        d = 0
        while self.period(d) % den:
            d += 1
        return d

    def character(self, lam):
        if not lam.is_rational():
            raise UnsupportedError(f"{lam} is irrational; odometer eigenvalues are rational")
        q = lam.rational_part
        d = self.depth_for(q)
        if d is None:
            raise UnsupportedError(f"{q} is not an odometer eigenvalue")
        P = self.period(d)
        k = q * P
        return lambda x: complex(np.exp(2j * np.pi * float(k) * self.position(x, d) / P))

    def character_family(self, order):
        """All characters factoring through depth ``order``."""
        P = self.period(order)
        return [(self.basis.rational(Fraction(j, P)), OdometerCharacter(self, j, order)) for j in range(P)]

    def position_array(self, batch, d: int) -> np.ndarray:
        cache = self._pos_cache
        if cache is None or cache[0] is not batch or cache[1] != d:
            cache = (batch, d, np.array([self.position(x, d) for x in batch], dtype=np.int64))
            self._pos_cache = cache
        return cache[2]

    def describe(self):
        return {"kind": self.kind, "digits": list(self.digits), "repeat": self.repeat, "depth": self.depth}


class OdometerCharacter:
    """``x -> exp(2 pi i j pos_d(x) / P_d)``, eigenvalue ``j / P_d``."""

    def __init__(self, system: Odometer, j: int, d: int):
        self.system, self.j, self.d = system, j, d
        self.P = system.period(d)

    def __call__(self, x) -> complex:
        return complex(np.exp(2j * np.pi * self.j * self.system.position(x, self.d) / self.P))

    def batch(self, orbit) -> np.ndarray:
        pos = self.system.position_array(orbit, self.d)
        return np.exp(2j * np.pi * self.j * pos / self.P)


# --------------------------------------------------------------------------
# Denjoy
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DenjoyState:
    """Factor coordinate plus a side tag on cut points.

    Points of the marker orbits ``m_j + k*s`` are doubled; ``marker=(j, k)``
    and ``side`` in {'-', '+'} select one copy."""

    x: float
    side: Optional[str] = None
    marker: Optional[tuple[int, int]] = None


class Denjoy(BaseSystem):
    """Denjoy system with rotation number ``s`` cut along finitely many
    marker orbits; an almost one-to-one extension of the rotation by ``s``,
    to which all numerics delegate."""

    kind = "denjoy"
    trig_dim = 1

    def __init__(self, s: ExactReal, markers: Sequence[ExactReal], *, depth: int = 50):
        if s.is_rational():
            raise ValueError("rotation number must be irrational")
        if not markers:
            raise ValueError("a Denjoy system needs at least one marker orbit")
        for m in markers:
            if m.basis is not s.basis:
                raise ValueError("marker over a different basis")
        self.s = s
        self.markers = tuple(markers)
        self.depth = depth
        self.basis = s.basis
        self.factor_system = CircleRotation(s)
        self._mf = [float(m) for m in markers]

    def marker_point(self, j: int, k: int, side: str) -> DenjoyState:
        if side not in ("-", "+"):
            raise ValueError("side must be '-' or '+'")
        x = (self._mf[j] + k * self.factor_system._sf) % 1.0
        return DenjoyState(x, side, (j, k))

    def marker_points(self) -> list[DenjoyState]:
        return [self.marker_point(j, k, side) for j in range(len(self.markers))
                for k in range(-self.depth, self.depth + 1) for side in "-+"]

    def step(self, x: DenjoyState, n: int = 1) -> DenjoyState:
        y = self.factor_system.step(x.x, n)
        if x.marker is None:
            return DenjoyState(y)
        j, k = x.marker
        return DenjoyState(y, x.side, (j, k + n))

    def factor(self, x: DenjoyState) -> float:
        return x.x

    def orbit(self, x, N):
        if x.marker is None:
            return [DenjoyState(float(y)) for y in self.factor_system.orbit(x.x, N)]
        return super().orbit(x, N)

    def coordinates(self, x):
        return x.x

    def coordinate_array(self, batch):
        return np.array([b.x for b in batch], dtype=float)

    def chart(self, x):
        return x.x % 1.0

    def random_state(self, rng):
        return DenjoyState(float(rng.random()))

    def distance(self, x, y):
        return _circle_dist(x.x, y.x)

    def admissible_class(self):
        return "trigonometric polynomials in the factor coordinate"

    def eigen_group_lift(self):
        return self.factor_system.eigen_group_lift()

    def trace_range(self):
        # Z + sZ + differences of marker positions (invariant under rotating
        # the whole picture); with a marker at 0 this is Z + sZ + sum m_j Z.
        m0 = self.markers[0]
        gens = [self.basis.one(), self.s] + [m - m0 for m in self.markers[1:]]
        return FgSubgroup(self.basis, gens)

    def character(self, lam):
        chi = self.factor_system.character(lam)
        return lambda x: chi(x.x)

    def character_family(self, order):
        return [(lam, lambda x, c=c: c(np.array([b.x for b in x]) if isinstance(x, list) else x.x))
                for lam, c in self.factor_system.character_family(order)]

    def describe(self):
        return {"kind": self.kind, "s": self.s.to_dict(), "markers": [m.to_dict() for m in self.markers]}


def denjoy_factor(x: DenjoyState) -> float:
    return x.x


# --------------------------------------------------------------------------
# Furstenberg transformation
# --------------------------------------------------------------------------


class Furstenberg(BaseSystem):
    """Inverse of ``(z1, z2) -> (z1 + theta, z2 + xi(z1) + n*z1)`` on the
    2-torus; ``xi`` is a trigonometric polynomial (frequency, cos, sin)."""

    kind = "furstenberg"
    trig_dim = 2
    uniquely_ergodic = False

    def __init__(self, theta: ExactReal, n: int, xi: Sequence[tuple[int, Any, Any]] = ()):
        if theta.is_rational():
            raise ValueError("theta must be irrational")
        if n == 0:
            raise ValueError("n must be nonzero")
        self.theta = theta
        self.n = int(n)
        self.xi = TrigPoly.make(0, xi, dim=1)
        self.basis = theta.basis
        self._tf = float(theta)

    def forward(self, z):
        z1, z2 = z
        return ((z1 + self._tf) % 1.0, (z2 + self.xi.at(z1) + self.n * z1) % 1.0)

    def backward(self, z):
        z1, z2 = z
        w1 = (z1 - self._tf) % 1.0
        return (w1, (z2 - self.xi.at(w1) - self.n * w1) % 1.0)

    def step(self, x, n: int = 1):
        # S is the inverse of the map written above
        for _ in range(abs(n)):
            x = self.backward(x) if n > 0 else self.forward(x)
        return x

    def measure_ids(self):
        return ["lebesgue"]

    def coordinates(self, x):
        return np.asarray(x, dtype=float)

    def coordinate_array(self, batch):
        return np.asarray(batch, dtype=float).reshape(-1, 2)

    def random_state(self, rng):
        return tuple(rng.random(2))

    def distance(self, x, y):
        return _circle_dist(x, y)

    def admissible_class(self):
        return "trigonometric polynomials in two variables"

    def describe(self):
        return {"kind": self.kind, "theta": self.theta.to_dict(), "n": self.n}


# --------------------------------------------------------------------------
# Declared
# --------------------------------------------------------------------------


class DeclaredSystem(BaseSystem):
    """A system known only through declared spectral and integral data.

    ``integrals[measure_id][function_id]`` holds exact integrals of declared
    functions; constants integrate to themselves.  ``dynamics`` optionally
    supplies a concrete system for numerics.
    """

    kind = "declared"

    def __init__(
        self,
        name: str,
        basis: GeneratorBasis,
        eigen_lift: FgSubgroup,
        trace_range: FgSubgroup,
        integrals: dict[str, dict[str, ExactReal]],
        *,
        traces_agree_on_K0: bool = False,
        dynamics: Optional[BaseSystem] = None,
        minimal: bool = True,
    ):
        if not integrals:
            raise ValueError("a declared system needs at least one measure")
        self.name = name
        self.basis = basis
        self._eigen = eigen_lift
        self._trace = trace_range
        self.integrals = {m: dict(v) for m, v in integrals.items()}
        self.traces_agree_on_K0 = traces_agree_on_K0
        self.dynamics = dynamics
        self.minimal = minimal
        self.uniquely_ergodic = len(self.integrals) == 1
        missing = [g for g in eigen_lift.generators if not trace_range.contains(g)]
        if missing:
            raise ValueError(
                f"declared eigenvalues {', '.join(map(str, missing))} are not in the declared trace range"
            )

    def measure_ids(self):
        return list(self.integrals)

    def admissible_class(self):
        return "constants and declared functions " + str(sorted({f for v in self.integrals.values() for f in v}))

    def _integrate(self, measure_id, f):
        if isinstance(f, DeclaredFunction):
            try:
                return self.integrals[measure_id][f.function_id]
            except KeyError:
                raise InadmissibleFunctionError(
                    f"no integral declared for {f.function_id!r} under {measure_id!r}"
                ) from None
        if isinstance(f, Constant):
            return f.value
        raise InadmissibleFunctionError(f"declared system integrates {self.admissible_class()}")

    def eigen_group_lift(self):
        return self._eigen

    def trace_range(self):
        return self._trace

    def is_minimal(self):
        if self.minimal:
            return Minimal(reason="declared minimal")
        return NotMinimal(reason="declared non-minimal")

    def _dyn(self):
        if self.dynamics is None:
            raise UnsupportedError(f"declared system {self.name!r} has no dynamics")
        return self.dynamics

    def step(self, x, n=1):
        return self._dyn().step(x, n)

    def orbit(self, x, N):
        return self._dyn().orbit(x, N)

    def coordinates(self, x):
        return self._dyn().coordinates(x)

    def random_state(self, rng):
        return self._dyn().random_state(rng)

    def distance(self, x, y):
        return self._dyn().distance(x, y)

    def describe(self):
        return {"kind": self.kind, "name": self.name, "measures": self.measure_ids(),
                "traces_agree_on_K0": self.traces_agree_on_K0}


# --------------------------------------------------------------------------
# Module-level operations
# --------------------------------------------------------------------------


def step(system: BaseSystem, x, n: int = 1):
    return system.step(x, n)


def eigen_group_lift(system: BaseSystem) -> FgSubgroup:
    return system.eigen_group_lift()


def trace_range(system: BaseSystem) -> FgSubgroup:
    return system.trace_range()


def integrate(system: BaseSystem, measure_id: str, f) -> ExactReal:
    return system.integrate(measure_id, f)


def is_minimal_base(system: BaseSystem):
    return system.is_minimal()


CATALOG = {
    "point": "one-point system; suspension is the circle; eigenvalues Z; trace range Z",
    "rotation": "circle rotation by irrational s; eigenvalues and trace range Z + sZ",
    "torus": "translation by (s1, s2) on the 2-torus; minimal iff 1, s1, s2 independent",
    "odometer": "adding machine on prod Z/n_i; eigenvalues and trace range: rationals with denominator dividing some n_1...n_d",
    "denjoy": "Denjoy system (rotation number s, marker orbits m_j); eigenvalues Z + sZ; trace range Z + sZ + sum (m_j - m_1)Z",
    "furstenberg": "Furstenberg skew product on the 2-torus; minimal; spectral data must be declared",
    "declared": "system given by declared eigenvalues, trace range and measure integrals",
}
