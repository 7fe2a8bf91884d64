"""Exact spectral engine for suspension flows.

Everything here is symbolic: eigenvalue groups are finitely generated
subgroups of R over a generator basis, and verdicts about time-t maps come
with certificates that recombine exactly.  A time map ``T^(1/rho)`` is
non-minimal exactly when ``rho`` lies in the Q-span of the eigenvalue group,
so the decider works with the reciprocal time ``rho``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .basesys import (
    BaseSystem,
    CircleRotation,
    DeclaredSystem,
    Denjoy,
    Odometer,
    Point,
    TorusTranslation,
    UnknownGroupError,
    UnsupportedError,
)
from .functions import CohomologousToConstant, Constant, CylinderLocallyConstant, DeclaredFunction, TrigPoly
from .qlinear import (
    ExactReal,
    FgSubgroup,
    NotRepresentableError,
    QSubspace,
    RationalLike,
    as_fraction,
    exact_mul,
    reciprocal,
)
from .suspension import SuspensionFlow, SuspensionPoint, flow as flow_map
from .verdicts import Certificate, Minimal, MinimalityVerdict, NotMinimal, Unknown


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class EigenGroup:
    """``Lambda(Y, T)``, optionally as ``(1/scale) * unscaled``."""

    group: FgSubgroup
    provenance: str
    unscaled: Optional[FgSubgroup] = None
    scale: Optional[ExactReal] = None

    @property
    def qspan(self) -> QSubspace:
        return self.group.qspan


def effective_constant(flow: SuspensionFlow) -> Optional[ExactReal]:
    """A constant the ceiling is cohomologous to, when one is known.

    Trigonometric-polynomial ceilings over translations (circle, torus,
    Denjoy factor) and cylinder ceilings over odometers are always
    cohomologous to their mean, via a finite Fourier (resp. cylinder)
    transfer function.
    """
    f, base = flow.ceiling, flow.base
    if isinstance(f, (Constant, CohomologousToConstant)):
        return f.value
    if isinstance(f, TrigPoly) and isinstance(base, (CircleRotation, TorusTranslation, Denjoy)):
        if isinstance(base, TorusTranslation) and not isinstance(base.is_minimal(), Minimal):
            return None
        return base.basis.rational(f.constant)
    if isinstance(f, CylinderLocallyConstant) and isinstance(base, Odometer):
        return base.integrate("haar", f)
    return None


def _rescale(group: FgSubgroup, c: ExactReal) -> Optional[FgSubgroup]:
    inv = reciprocal(c)
    if inv is None:
        return None
    try:
        return group.scale(inv)
    except NotRepresentableError:
        return None


def suspension_eigen_group(flow: SuspensionFlow) -> Union[EigenGroup, Unknown]:
    base = flow.base
    if isinstance(base, DeclaredSystem) and len(base.measure_ids()) >= 2 and base.traces_agree_on_K0:
        vals = list(flow.mean_ceilings().values())
        if any(v != vals[0] for v in vals[1:]):
            # every eigenvalue lies in (1/tau_mu(f)) * (common trace range) for
            # a continuum of tau_mu(f); only 0 survives
            return EigenGroup(FgSubgroup(base.basis), "packer-katsura-trivial")
    c = effective_constant(flow)
    if c is None:
        return Unknown(f"no eigenvalue rule for ceiling {type(flow.ceiling).__name__} over {base.kind}")
    try:
        lift = base.eigen_group_lift()
    except UnknownGroupError as e:
        return Unknown(str(e))
    if c == 1:
        return EigenGroup(lift, "standard", lift, c)
    scaled = _rescale(lift, c)
    if scaled is None:
        return Unknown(f"1/({c}) times the base eigenvalues is not representable in basis {base.basis.id!r}")
    prov = "constant-rescale" if isinstance(flow.ceiling, Constant) else "cohomologous"
    return EigenGroup(scaled, prov, lift, c)


def _independence(flow: SuspensionFlow) -> str:
    return flow.base.basis.independence_note


def decide_time_map(flow: SuspensionFlow, rho: ExactReal) -> MinimalityVerdict:
    """Minimality of ``T^(1/rho)``."""
    if rho.basis is not flow.base.basis:
        raise DomainError(f"rho over basis {rho.basis.id!r}, flow over {flow.base.basis.id!r}")
    if not rho:
        raise DomainError("rho = 0 corresponds to no finite time")
    base_verdict = flow.base.is_minimal()
    if isinstance(base_verdict, NotMinimal):
        return NotMinimal(reason="the flow itself is not minimal: " + base_verdict.reason)
    eg = suspension_eigen_group(flow)
    if isinstance(eg, Unknown):
        return Unknown(eg.reason)
    coeffs = eg.group.qspan.membership(rho)
    if coeffs is None:
        return Minimal(conditional_on=_independence(flow),
                       reason="rho is outside the Q-span of the eigenvalue group")
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    combination = tuple(int(c * den) for c in coeffs)
    lam = eg.group.combine(combination)
    cert = Certificate(rho=rho, r=Fraction(1, den), lam=lam, combination=combination,
                       generators=eg.group.generators)
    assert cert.check()
    return NotMinimal(cert, reason="rho = r * lambda with lambda an eigenvalue")


def decide_time(flow: SuspensionFlow, t: ExactReal) -> MinimalityVerdict:
    """Minimality of ``T^t``, for t whose reciprocal is representable."""
    if not t:
        return NotMinimal(reason="T^0 is the identity")
    rho = reciprocal(t)
    if rho is None:
        return Unknown(f"1/({t}) is not representable; pass the reciprocal time to decide_time_map")
    return decide_time_map(flow, rho)


# --------------------------------------------------------------------------
# Rieffel decomposition and clopen realization
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RieffelDecomposition:
    t: ExactReal
    r1: Fraction
    r2: Fraction
    gamma: ExactReal
    gamma_combination: Optional[tuple[int, ...]] = None

    def recombine(self) -> ExactReal:
        return self.gamma * self.r2 + self.r1


def rieffel_decomposition(flow: SuspensionFlow, t: ExactReal,
                          verdict: Optional[NotMinimal] = None) -> RieffelDecomposition:
    """Write ``t = r1 + r2*gamma`` with ``gamma`` an eigenvalue in (0, 1).

    From a certificate ``t = r*lam``: write ``lam = q + d*mu`` with ``q``
    rational and ``mu`` in the group, then split ``mu`` into integer and
    fractional parts.  Since Z lies in the eigenvalue group of a standard
    suspension, so does ``gamma = mu - floor(mu)``.
    """
    if not flow.is_standard:
        raise DomainError("Rieffel decomposition needs the standard suspension (f = 1)")
    if verdict is None:
        verdict = decide_time_map(flow, t)
    if not isinstance(verdict, NotMinimal) or verdict.certificate is None:
        raise DomainError(f"{t} is not in the Q-span of the eigenvalue group")
    cert = verdict.certificate
    if cert.rho != t:
        raise DomainError("certificate is for a different value")
    group = FgSubgroup(flow.base.basis, cert.generators)
    if not group.contains(flow.base.basis.one()):
        raise DomainError("eigenvalue group does not contain Z")
    lam = cert.lam
    zero = flow.base.basis.zero()
    if lam.is_rational():
        return RieffelDecomposition(t, t.rational_part, Fraction(0), zero, ())
    # split off the part of lam carried by irrational generators and divide
    # it by the gcd of its coefficients, so the fractional part is as
    # primitive as the certificate allows
    irr = [(n, g) for n, g in zip(cert.combination, cert.generators) if n and not g.is_rational()]
    d = math.gcd(*(n for n, _ in irr)) if irr else 1
    mu = zero
    for n, g in irr:
        mu = mu + g * (n // d)
    rest = lam - mu * d
    n0 = mu.floor()
    gamma = mu - n0
    if not gamma:
        return RieffelDecomposition(t, t.rational_part, Fraction(0), zero, ())
    if not (gamma.sign() > 0 and (gamma - 1).sign() < 0):
        raise ArithmeticError(f"fractional part {gamma} escaped (0, 1)")
    comb = group.membership(gamma)
    if comb is None:
        raise ArithmeticError(f"fractional part {gamma} not in the eigenvalue group")
    out = RieffelDecomposition(t, cert.r * (rest.rational_part + d * n0), cert.r * d, gamma, comb)
    assert out.recombine() == t
    return out


def clopen_realization(odometer: Odometer, gamma: RationalLike, max_depth: int = 12):
    """Disjoint cylinders of total measure ``gamma``.

    Greedy on the mixed-radix expansion ``gamma = sum a_k / (n_1...n_k)``:
    at level k take ``a_k`` consecutive cylinders inside the leftover
    cylinder of level k-1.
    """
    from .basesys import Cylinder

    g = as_fraction(gamma.rational_part if isinstance(gamma, ExactReal) else gamma)
    if not 0 <= g <= 1:
        raise DomainError(f"gamma = {g} is not in [0, 1]")
    d = next((k for k in range(max_depth + 1) if odometer.period(k) % g.denominator == 0), None)
    if d is None:
        raise DomainError(
            f"denominator {g.denominator} does not divide n_1...n_k for any k <= {max_depth}; "
            f"attainable denominators: divisors of {[odometer.period(k) for k in range(1, max_depth + 1)]}"
        )
    if g == 1:
        return [Cylinder((a,), Fraction(1, odometer.radix(0))) for a in range(odometer.radix(0))]
    out = []
    prefix: tuple[int, ...] = ()
    rest = g
    for k in range(d):
        r = odometer.radix(k)
        m = Fraction(1, odometer.period(k + 1))
        a = min(math.floor(rest / m), r)
        out.extend(Cylinder(prefix + (j,), m) for j in range(a))
        rest -= a * m
        if rest == 0:
            break
        prefix = prefix + (a,)
    assert rest == 0 and sum((c.measure for c in out), Fraction(0)) == g
    return out


# --------------------------------------------------------------------------
# Trace image of Lambda K
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaKImage:
    """``tau_mu(Lambda K) = tau_mu(f) * Lambda(Y, T)`` with its containment
    certificate in the trace range: per generator, integer coefficients or
    None."""

    subgroup: FgSubgroup
    measure_id: str
    trace_range: FgSubgroup
    containment: tuple[Optional[tuple[int, ...]], ...]

    @property
    def contained(self) -> bool:
        return all(c is not None for c in self.containment)

    def equals_trace_range(self) -> bool:
        return self.contained and all(self.subgroup.contains(g) for g in self.trace_range.generators)

    def missing_from_image(self) -> list[ExactReal]:
        return [g for g in self.trace_range.generators if not self.subgroup.contains(g)]


def lambdaK_trace_image(flow: SuspensionFlow, measure_id: Optional[str] = None) -> LambdaKImage:
    mid = measure_id if measure_id is not None else flow.base.measure_ids()[0]
    eg = suspension_eigen_group(flow)
    if isinstance(eg, Unknown):
        raise UnknownGroupError(eg.reason)
    trace = flow.base.trace_range()
    tau_f = flow.mean_ceiling(mid)
    if eg.scale is not None and eg.scale == tau_f:
        image = eg.unscaled
    else:
        try:
            image = eg.group.scale(tau_f)
        except NotRepresentableError as e:
            raise UnknownGroupError(str(e)) from None
    cont = tuple(trace.membership(g) for g in image.generators)
    return LambdaKImage(image, mid, trace, cont)


def tau_mu_f(flow: SuspensionFlow, x: ExactReal, measure_id: Optional[str] = None) -> ExactReal:
    """``tau_{mu,f}(x) = tau_mu(x) / tau_mu(f)`` on trace values."""
    return x / flow.mean_ceiling(measure_id)


# --------------------------------------------------------------------------
# Numeric eigenvector check and Schwartzman positivity
# --------------------------------------------------------------------------


def lifted_eigenvector(flow: SuspensionFlow, lam: ExactReal,
                       chi_base: Callable[[Any], complex]) -> Callable[[SuspensionPoint], complex]:
    """``[x, s] -> exp(2 pi i s lam) chi(x)`` for a constant ceiling c, where
    ``chi(Sx) = exp(2 pi i c lam) chi(x)``."""
    if not isinstance(flow.ceiling, Constant):
        raise UnsupportedError("eigenvector lift is implemented for constant ceilings")
    lf = float(lam)

    def chi(p: SuspensionPoint) -> complex:
        return complex(np.exp(2j * np.pi * lf * p.height)) * complex(chi_base(p.base))

    return chi


def eigenvector_residual(flow: SuspensionFlow, lam: ExactReal, chi_base: Callable[[Any], complex],
                         sample: Iterable[tuple[SuspensionPoint, float]]) -> float:
    chi = lifted_eigenvector(flow, lam, chi_base)
    lf = float(lam)
    worst = 0.0
    for p, t in sample:
        lhs = chi(flow_map(flow, p, t))
        rhs = complex(np.exp(2j * np.pi * lf * t)) * chi(p)
        worst = max(worst, abs(lhs - rhs))
    return worst


def base_character(flow: SuspensionFlow, lam: ExactReal) -> Callable[[Any], complex]:
    """Catalog eigenvector of the base for ``exp(2 pi i c lam)``."""
    c = flow.ceiling.value if isinstance(flow.ceiling, Constant) else None
    if c is None:
        raise UnsupportedError("base characters are looked up for constant ceilings")
    return flow.base.character(exact_mul(c, lam))


@dataclass(frozen=True)
class SchwartzmanResult:
    per_measure: dict[str, bool]
    values: dict[str, ExactReal]
    positive: bool


def schwartzman_positive(flow: SuspensionFlow, lam: ExactReal) -> SchwartzmanResult:
    """Is ``lam * integral(f dmu) > 0`` for every invariant measure?"""
    values, per = {}, {}
    for mid, tau in flow.mean_ceilings().items():
        v = exact_mul(lam, tau)
        values[mid] = v
        per[mid] = v.sign() > 0
    return SchwartzmanResult(per, values, bool(lam) and all(per.values()))
