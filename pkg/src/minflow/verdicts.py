"""Verdict values shared by the catalog and the spectral decider."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Union

from .qlinear import ExactReal


@dataclass(frozen=True)
class Certificate:
    """Witness that ``rho = r * lam`` with ``lam`` an eigenvalue.

    ``combination`` holds the integer coefficients of ``lam`` over
    ``generators`` (the eigen group's generators)."""

    rho: ExactReal
    r: Fraction
    lam: ExactReal
    combination: tuple[int, ...]
    generators: tuple[ExactReal, ...]

    def check(self) -> bool:
        if self.r == 0:
            return False
        if self.lam * self.r != self.rho:
            return False
        total = self.rho.basis.zero()
        for n, g in zip(self.combination, self.generators):
            total = total + g * n
        return total == self.lam


@dataclass(frozen=True)
class Minimal:
    conditional_on: Optional[str] = None
    reason: str = ""

    name = "Minimal"


@dataclass(frozen=True)
class NotMinimal:
    certificate: Optional[Certificate] = None
    reason: str = ""

    name = "NotMinimal"


@dataclass(frozen=True)
class Unknown:
    reason: str
    evidence: Any = None

    name = "Unknown"


MinimalityVerdict = Union[Minimal, NotMinimal, Unknown]
