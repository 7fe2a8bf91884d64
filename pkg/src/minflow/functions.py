"""Concrete continuous functions on catalog base spaces.

These are the admissible integrands of the catalog measures and the
admissible ceilings of suspension flows: constants, trigonometric
polynomials with rational coefficients (circle/torus coordinates),
functions constant on odometer cylinders, functions cohomologous to a
constant, and opaque declared functions whose integrals are tabulated by a
declared system.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence, Union

import numpy as np

from .qlinear import ExactReal, RationalLike, as_fraction

TWO_PI = 2 * math.pi

Frequency = Union[int, tuple[int, int]]


class InadmissibleFunctionError(TypeError):
    pass


@dataclass(frozen=True)
class Constant:
    value: ExactReal

    def numeric(self) -> float:
        return float(self.value)

    def evaluate(self, system, state) -> float:
        return self.numeric()

    def evaluate_batch(self, system, batch) -> np.ndarray:
        return np.full(len(batch), self.numeric())

    def is_strictly_positive(self, system=None) -> bool:
        return self.value.sign() > 0

    def bounds(self, system=None) -> tuple[float, float]:
        v = self.numeric()
        return v, v


@dataclass(frozen=True)
class TrigTerm:
    freq: Frequency
    cos: Fraction = Fraction(0)
    sin: Fraction = Fraction(0)


def _freq_tuple(freq: Frequency) -> tuple[int, ...]:
    return (freq,) if isinstance(freq, int) else tuple(freq)


@dataclass(frozen=True)
class TrigPoly:
    """``constant + sum(a*cos(2 pi k.x) + b*sin(2 pi k.x))`` on the circle
    (``dim=1``) or the 2-torus (``dim=2``)."""

    constant: Fraction
    terms: tuple[TrigTerm, ...] = ()
    dim: int = 1

    @classmethod
    def make(cls, constant: RationalLike, terms: Sequence = (), dim: int = 1) -> "TrigPoly":
        built = []
        for t in terms:
            if not isinstance(t, TrigTerm):
                freq, a, b = t
                t = TrigTerm(freq if isinstance(freq, int) else tuple(freq), as_fraction(a), as_fraction(b))
            k = _freq_tuple(t.freq)
            if len(k) != dim:
                raise ValueError(f"frequency {t.freq} does not match dimension {dim}")
            if not any(k):
                raise ValueError("zero frequency belongs in the constant term")
            built.append(t)
        return cls(as_fraction(constant), tuple(built), dim)

    def oscillation_bound(self) -> Fraction:
        return sum((abs(t.cos) + abs(t.sin) for t in self.terms), Fraction(0))

    def is_strictly_positive(self, system=None) -> bool:
        # sufficient condition only
        return self.constant > self.oscillation_bound()

    def bounds(self, system=None) -> tuple[float, float]:
        b = float(self.oscillation_bound())
        c = float(self.constant)
        return c - b, c + b

    def _phase(self, k: tuple[int, ...], coords) -> Any:
        if self.dim == 1:
            return TWO_PI * k[0] * coords
        return TWO_PI * (k[0] * coords[..., 0] + k[1] * coords[..., 1])

    def at(self, coords) -> float:
        """Value at a circle coordinate (float) or torus pair."""
        c = np.asarray(coords, dtype=float)
        total = float(self.constant)
        for t in self.terms:
            ph = self._phase(_freq_tuple(t.freq), c)
            total += float(t.cos) * math.cos(ph) + float(t.sin) * math.sin(ph)
        return total

    def at_many(self, coords: np.ndarray) -> np.ndarray:
        out = np.full(coords.shape[0], float(self.constant))
        for t in self.terms:
            ph = self._phase(_freq_tuple(t.freq), coords)
            out += float(t.cos) * np.cos(ph) + float(t.sin) * np.sin(ph)
        return out

    def evaluate(self, system, state) -> float:
        _check_dim(self, system)
        return self.at(system.coordinates(state))

    def evaluate_batch(self, system, batch) -> np.ndarray:
        _check_dim(self, system)
        return self.at_many(system.coordinate_array(batch))

    def orbit_sum(self, coords, shift, n: int) -> float:
        """Birkhoff sum ``alpha(x, n)`` along the translation by ``shift``,
        in closed form (geometric sums of exponentials)."""
        if n == 0:
            return 0.0
        x = np.atleast_1d(np.asarray(coords, dtype=float))
        s = np.atleast_1d(np.asarray(shift, dtype=float))
        total = n * float(self.constant)
        for t in self.terms:
            k = np.array(_freq_tuple(t.freq), dtype=float)
            step_phase = TWO_PI * float(k @ s)
            ratio = cmath.exp(1j * step_phase)
            start = cmath.exp(1j * TWO_PI * float(k @ x))
            if abs(ratio - 1) < 1e-12:
                geo = complex(n)
            else:
                geo = (cmath.exp(1j * step_phase * n) - 1) / (ratio - 1)
            z = start * geo
            total += float(t.cos) * z.real + float(t.sin) * z.imag
        return total


def _check_dim(f: TrigPoly, system) -> None:
    dim = getattr(system, "trig_dim", None)
    if dim != f.dim:
        raise InadmissibleFunctionError(
            f"{type(system).__name__} admits trigonometric polynomials of dimension {dim}, got {f.dim}"
        )


@dataclass(frozen=True)
class CylinderLocallyConstant:
    """Odometer function constant on each depth-``depth`` cylinder."""

    depth: int
    values: tuple[tuple[tuple[int, ...], Fraction], ...]

    @classmethod
    def make(cls, depth: int, values: dict) -> "CylinderLocallyConstant":
        items = tuple(sorted((tuple(w), as_fraction(v)) for w, v in values.items()))
        for w, _ in items:
            if len(w) != depth:
                raise ValueError(f"cylinder word {w} does not have length {depth}")
        return cls(depth, items)

    @property
    def table(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.values)

    def value_at(self, system, state) -> Fraction:
        word = system.word(state, self.depth)
        try:
            return self.table[word]
        except KeyError:
            raise InadmissibleFunctionError(f"no value declared for cylinder {word}") from None

    def evaluate(self, system, state) -> float:
        return float(self.value_at(system, state))

    def evaluate_batch(self, system, batch) -> np.ndarray:
        table = {w: float(v) for w, v in self.values}
        return np.array([table[system.word(x, self.depth)] for x in batch])

    def is_strictly_positive(self, system=None) -> bool:
        return all(v > 0 for _, v in self.values)

    def bounds(self, system=None) -> tuple[float, float]:
        vs = [float(v) for _, v in self.values]
        return min(vs), max(vs)


@dataclass(frozen=True)
class CohomologousToConstant:
    """``f = c + g o S - g`` for a declared continuous transfer ``g``."""

    value: ExactReal
    transfer: Callable[[Any], float]
    name: str = "g"

    def evaluate(self, system, state) -> float:
        return float(self.value) + self.transfer(system.step(state, 1)) - self.transfer(state)

    def evaluate_batch(self, system, batch) -> np.ndarray:
        return np.array([self.evaluate(system, x) for x in batch])

    def is_strictly_positive(self, system=None) -> bool:
        # positivity of c is necessary; the transfer is taken on trust
        return self.value.sign() > 0

    def bounds(self, system=None) -> tuple[float, float]:
        return 0.0, math.inf


@dataclass(frozen=True)
class DeclaredFunction:
    """A function known only by id; its integrals are declared per measure."""

    function_id: str
    evaluator: Optional[Callable[[Any], float]] = field(default=None, compare=False)
    lower_bound: Optional[float] = None

    def evaluate(self, system, state) -> float:
        if self.evaluator is None:
            raise InadmissibleFunctionError(f"declared function {self.function_id!r} has no evaluator")
        return self.evaluator(state)

    def evaluate_batch(self, system, batch) -> np.ndarray:
        return np.array([self.evaluate(system, x) for x in batch])

    def is_strictly_positive(self, system=None) -> bool:
        return self.lower_bound is not None and self.lower_bound > 0

    def bounds(self, system=None) -> tuple[float, float]:
        return (self.lower_bound or 0.0), math.inf


Function = Union[Constant, TrigPoly, CylinderLocallyConstant, CohomologousToConstant, DeclaredFunction]
