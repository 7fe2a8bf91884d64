"""Exact arithmetic in the Q-span of 1 and finitely many declared irrationals.

An :class:`ExactReal` is a vector of rationals ``(q0, q1, ..., qk)`` read as
``q0 + q1*g1 + ... + qk*gk`` over a :class:`GeneratorBasis`.  Because
``{1, g1, ..., gk}`` is *declared* linearly independent over Q, equality of
values is equality of coefficient vectors, and every membership question
below is a finite exact linear-algebra problem.  Generator enclosures are
only consulted for order questions (sign, floor) and numeric output.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from numbers import Rational
from typing import Callable, Iterable, Optional, Sequence, Union

__all__ = [
    "BasisMismatchError",
    "ConvergenceError",
    "NotRepresentableError",
    "Generator",
    "GeneratorBasis",
    "ExactReal",
    "QSubspace",
    "FgSubgroup",
    "exact_add",
    "exact_neg",
    "exact_scale",
    "exact_mul",
    "approx",
    "qspan_membership",
    "subgroup_membership",
    "qspan_of",
    "reciprocal",
    "sqrt_generator",
    "decimal_generator",
    "opaque_generator",
]

RationalLike = Union[int, Fraction, str]
Interval = tuple[Fraction, Fraction]

# Order decisions refine down to widths of 2**-MAX_BITS before giving up.
MAX_BITS = 4096


class BasisMismatchError(ValueError):
    def __init__(self, a: "GeneratorBasis", b: "GeneratorBasis"):
        super().__init__(f"basis mismatch: {a.id!r} vs {b.id!r}")
        self.ids = (a.id, b.id)


class ConvergenceError(ArithmeticError):
    """A refiner could not reach the requested width; ``best`` is the
    narrowest enclosure obtained."""

    def __init__(self, message: str, best: Interval):
        super().__init__(f"{message} (best interval [{best[0]}, {best[1]}])")
        self.best = best


class NotRepresentableError(ArithmeticError):
    pass


def as_fraction(q: RationalLike) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, (int, Rational)):
        return Fraction(q)
    if isinstance(q, str):
        return Fraction(q.strip())
    if isinstance(q, float):
        raise TypeError("floats are not exact rationals; pass a string or Fraction")
    raise TypeError(f"not a rational: {q!r}")


# --------------------------------------------------------------------------
# Generators and bases
# --------------------------------------------------------------------------

Refiner = Callable[[Fraction], Interval]


class Generator:
    """A named irrational with a shrinkable rational enclosure.

    ``refiner(width)`` must return an interval containing the generator of
    width at most ``width`` when it can; intervals it returns are
    intersected with the cached enclosure so successive enclosures nest.
    ``square`` records ``g**2`` when it is a known rational (quadratic
    generators), which is what reciprocal/product closure relies on.
    """

    def __init__(
        self,
        name: str,
        enclosure: Interval,
        refiner: Optional[Refiner] = None,
        *,
        kind: str = "opaque",
        square: Optional[Fraction] = None,
        quadratic_closure: bool = False,
    ):
        lo, hi = as_fraction(enclosure[0]), as_fraction(enclosure[1])
        if not lo < hi:
            raise ValueError(f"generator {name!r}: enclosure needs lo < hi, got [{lo}, {hi}]")
        if quadratic_closure and square is None:
            raise ValueError(f"generator {name!r}: quadratic closure needs a known square")
        self.name = name
        self.kind = kind
        self.square = None if square is None else as_fraction(square)
        self.quadratic_closure = quadratic_closure
        self._refiner = refiner
        self._enclosure = (lo, hi)

    def __repr__(self):
        return f"Generator({self.name!r}, kind={self.kind!r})"

    @property
    def enclosure(self) -> Interval:
        return self._enclosure

    def refine(self, width: Fraction) -> Interval:
        lo, hi = self._enclosure
        if hi - lo <= width:
            return self._enclosure
        if self._refiner is None:
            raise ConvergenceError(f"generator {self.name!r} is opaque", self._enclosure)
        nlo, nhi = self._refiner(Fraction(width))
        nlo, nhi = max(lo, nlo), min(hi, nhi)
        if not nlo < nhi:
            raise ConvergenceError(
                f"refiner for {self.name!r} left the enclosure", self._enclosure
            )
        self._enclosure = (nlo, nhi)
        if nhi - nlo > width:
            raise ConvergenceError(f"refiner for {self.name!r} stalled", self._enclosure)
        return self._enclosure

    def best(self, width: Fraction) -> Fraction:
        """Midpoint of the tightest enclosure available down to ``width``."""
        try:
            lo, hi = self.refine(width)
        except ConvergenceError:
            lo, hi = self._enclosure
        return (lo + hi) / 2

    def midpoint(self) -> float:
        return float(self.best(Fraction(1, 2**60)))


def _sqrt_refiner(n: Fraction) -> Refiner:
    # sqrt(p/q) = sqrt(p*q)/q
    p, q = n.numerator, n.denominator

    def refine(width: Fraction) -> Interval:
        bits = max(1, (width.denominator // max(width.numerator, 1)).bit_length() + 1)
        bits += q.bit_length()
        scale = 1 << bits
        r = math.isqrt(p * q * scale * scale)
        return Fraction(r, scale * q), Fraction(r + 1, scale * q)

    return refine


def sqrt_generator(name: str, n: RationalLike, *, quadratic_closure: bool = True) -> Generator:
    n = as_fraction(n)
    if n <= 0:
        raise ValueError("sqrt generator needs a positive radicand")
    p, q = n.numerator, n.denominator
    if math.isqrt(p * q) ** 2 == p * q:
        raise ValueError(f"sqrt({n}) is rational")
    refine = _sqrt_refiner(n)
    return Generator(
        name,
        refine(Fraction(1, 4)),
        refine,
        kind=f"sqrt {n}",
        square=n,
        quadratic_closure=quadratic_closure,
    )


def decimal_generator(name: str, digits: str) -> Generator:
    """A generator known only through a decimal literal.  The enclosure is
    the literal plus or minus one unit in its last place and cannot be
    refined further."""
    value = Fraction(digits)
    places = len(digits.split(".", 1)[1]) if "." in digits else 0
    ulp = Fraction(1, 10**places)
    enc = (value - ulp, value + ulp)
    return Generator(name, enc, lambda w: enc, kind=f"decimal-literal {digits}")


def opaque_generator(name: str, lo: RationalLike, hi: RationalLike) -> Generator:
    return Generator(name, (as_fraction(lo), as_fraction(hi)), None, kind="opaque")


_basis_ids = count()


class GeneratorBasis:
    """Ordered generators ``g1..gk``; coordinate 0 is reserved for ``1``."""

    def __init__(
        self,
        generators: Sequence[Generator] = (),
        *,
        id: Optional[str] = None,
        independence_note: Optional[str] = None,
    ):
        names = [g.name for g in generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        if "1" in names:
            raise ValueError("'1' is reserved for the rational coordinate")
        self.generators = tuple(generators)
        self.id = id if id is not None else f"basis-{next(_basis_ids)}"
        if independence_note is None:
            independence_note = (
                "assumed: {" + ", ".join(["1", *names]) + "} is linearly independent over Q"
            )
        self.independence_note = independence_note
        self._index = {name: i + 1 for i, name in enumerate(names)}

    def __repr__(self):
        return f"GeneratorBasis(id={self.id!r}, generators={[g.name for g in self.generators]})"

    @property
    def dim(self) -> int:
        return len(self.generators) + 1

    def names(self) -> list[str]:
        return ["1", *(g.name for g in self.generators)]

    def index(self, name: str) -> int:
        if name == "1":
            return 0
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"generator {name!r} is not declared in basis {self.id!r}") from None

    def generator(self, name: str) -> Generator:
        return self.generators[self.index(name) - 1]

    def rational(self, q: RationalLike) -> "ExactReal":
        return ExactReal(self, (as_fraction(q),) + (Fraction(0),) * (self.dim - 1))

    def zero(self) -> "ExactReal":
        return self.rational(0)

    def one(self) -> "ExactReal":
        return self.rational(1)

    def __getitem__(self, name: str) -> "ExactReal":
        """The generator ``name`` as an ExactReal (``basis['s']``)."""
        coeffs = [Fraction(0)] * self.dim
        coeffs[self.index(name)] = Fraction(1)
        return ExactReal(self, tuple(coeffs))

    def element(self, coeffs: dict[str, RationalLike]) -> "ExactReal":
        vec = [Fraction(0)] * self.dim
        for name, q in coeffs.items():
            vec[self.index(name)] += as_fraction(q)
        return ExactReal(self, tuple(vec))

    _TERM = re.compile(
        r"\s*([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?([A-Za-z_][A-Za-z_0-9]*)?\s*(?:/\s*(\d+))?\s*"
    )

    def parse(self, text: str) -> "ExactReal":
        """Parse ``"3/2 + 2*s - s2/3"``-style text."""
        text = text.strip()
        if not text:
            raise ValueError("empty expression")
        coeffs: dict[str, Fraction] = {}
        pos = 0
        first = True
        while pos < len(text):
            m = self._TERM.match(text, pos)
            if m is None or m.end() == pos:
                raise ValueError(f"cannot parse {text!r} at offset {pos}")
            sign, num, name, den = m.groups()
            if not sign and not first:
                raise ValueError(f"expected '+' or '-' in {text!r} at offset {pos}")
            if num is None and name is None:
                raise ValueError(f"empty term in {text!r} at offset {pos}")
            q = Fraction(num) if num is not None else Fraction(1)
            if den is not None:
                q /= int(den)
            if sign == "-":
                q = -q
            key = name if name is not None else "1"
            self.index(key)
            coeffs[key] = coeffs.get(key, Fraction(0)) + q
            pos = m.end()
            first = False
        return self.element(coeffs)


# --------------------------------------------------------------------------
# ExactReal
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExactReal:
    basis: GeneratorBasis
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.basis.dim:
            raise ValueError(
                f"coefficient vector of length {len(self.coeffs)} for basis of dim {self.basis.dim}"
            )
        if not all(isinstance(c, Fraction) for c in self.coeffs):
            object.__setattr__(self, "coeffs", tuple(as_fraction(c) for c in self.coeffs))

    def _check(self, other: "ExactReal"):
        if other.basis is not self.basis:
            raise BasisMismatchError(self.basis, other.basis)

    def _coerce(self, other) -> "ExactReal":
        if isinstance(other, ExactReal):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.basis.rational(other)
        return NotImplemented

    # value semantics
    def __eq__(self, other):
        other = self._coerce(other) if isinstance(other, (ExactReal, int, Fraction)) else None
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.basis.id, self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ExactReal(self.basis, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return ExactReal(self.basis, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return exact_scale(self, other)
        if isinstance(other, ExactReal):
            return exact_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of ExactReal by zero")
            return exact_scale(self, 1 / Fraction(other))
        if isinstance(other, ExactReal):
            inv = reciprocal(other)
            if inv is None:
                raise NotRepresentableError(f"1/({other}) is not representable in {self.basis.id!r}")
            return exact_mul(self, inv)
        return NotImplemented

    def __bool__(self):
        return any(self.coeffs)

    # structure
    @property
    def rational_part(self) -> Fraction:
        return self.coeffs[0]

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if c and i > 0]

    def to_dict(self) -> dict[str, str]:
        return {n: str(c) for n, c in zip(self.basis.names(), self.coeffs) if c}

    def __str__(self):
        parts = []
        for name, c in zip(self.basis.names(), self.coeffs):
            if not c:
                continue
            if name == "1":
                term = str(abs(c))
            elif abs(c) == 1:
                term = name
            else:
                term = f"{abs(c)}*{name}"
            parts.append(("-" if c < 0 else "+", term))
        if not parts:
            return "0"
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return head + "".join(f" {s} {t}" for s, t in parts[1:])

    def __repr__(self):
        return f"ExactReal({self}, basis={self.basis.id!r})"

    # order, via enclosures
    def interval(self, eps: RationalLike = Fraction(1, 2**53)) -> Interval:
        return approx(self, eps)

    def __float__(self):
        # best effort: generators that cannot be refined (decimal literals,
        # opaque values) contribute the midpoint of their enclosure
        total = self.coeffs[0]
        for i in self.support():
            total += self.coeffs[i] * self.basis.generators[i - 1].best(Fraction(1, 2**60))
        return float(total)

    def sign(self) -> int:
        if not self:
            return 0
        if self.is_rational():
            return (self.coeffs[0] > 0) - (self.coeffs[0] < 0)
        bits = 8
        while bits <= MAX_BITS:
            lo, hi = approx(self, Fraction(1, 2**bits))
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        raise ConvergenceError(f"could not separate {self} from 0", approx(self, Fraction(1, 2**MAX_BITS)))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def floor(self) -> int:
        """Integer part.  Irrational values are never integers (declared
        independence), so bisection of the enclosure terminates."""
        if self.is_rational():
            return math.floor(self.coeffs[0])
        bits = 8
        while bits <= MAX_BITS:
            lo, hi = approx(self, Fraction(1, 2**bits))
            if math.floor(lo) == math.ceil(hi) - 1:
                return math.floor(lo)
            bits *= 2
        raise ConvergenceError(f"could not locate floor of {self}", approx(self, Fraction(1, 2**MAX_BITS)))


def exact_add(a: ExactReal, b: ExactReal) -> ExactReal:
    a._check(b)
    return a + b


def exact_neg(a: ExactReal) -> ExactReal:
    return -a


def exact_scale(a: ExactReal, r: RationalLike) -> ExactReal:
    r = as_fraction(r)
    return ExactReal(a.basis, tuple(r * c for c in a.coeffs))


def _quadratic_generator(a: ExactReal) -> Optional[int]:
    """Index of the single quadratic-closure generator ``a`` lives over."""
    sup = a.support()
    if len(sup) != 1:
        return None
    g = a.basis.generators[sup[0] - 1]
    return sup[0] if g.quadratic_closure else None


def exact_mul(a: ExactReal, b: ExactReal) -> ExactReal:
    """Product, defined when one factor is rational or both lie in Q(g) for
    one quadratic-closure generator g."""
    a._check(b)
    if a.is_rational():
        return exact_scale(b, a.coeffs[0])
    if b.is_rational():
        return exact_scale(a, b.coeffs[0])
    i, j = _quadratic_generator(a), _quadratic_generator(b)
    if i is None or i != j:
        raise NotRepresentableError(f"({a})*({b}) leaves the Q-span of {a.basis.id!r}")
    d = a.basis.generators[i - 1].square
    p, q = a.coeffs[0], a.coeffs[i]
    r, s = b.coeffs[0], b.coeffs[i]
    out = [Fraction(0)] * a.basis.dim
    out[0] = p * r + q * s * d
    out[i] = p * s + q * r
    return ExactReal(a.basis, tuple(out))


def reciprocal(a: ExactReal) -> Optional[ExactReal]:
    """``1/a`` when representable (rational ``a`` or ``a`` in a declared
    quadratic closure), else None."""
    if not a:
        raise ZeroDivisionError("reciprocal of zero")
    if a.is_rational():
        return a.basis.rational(1 / a.coeffs[0])
    i = _quadratic_generator(a)
    if i is None:
        return None
    d = a.basis.generators[i - 1].square
    p, q = a.coeffs[0], a.coeffs[i]
    norm = p * p - q * q * d
    out = [Fraction(0)] * a.basis.dim
    out[0] = p / norm
    out[i] = -q / norm
    return ExactReal(a.basis, tuple(out))


def approx(a: ExactReal, eps: RationalLike) -> Interval:
    """Rational interval of width <= eps containing the value of ``a``."""
    eps = as_fraction(eps) if not isinstance(eps, float) else Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    sup = a.support()
    lo = hi = a.coeffs[0]
    if not sup:
        return lo, hi
    total = sum(abs(a.coeffs[i]) for i in sup)
    share = eps / total
    for i in sup:
        glo, ghi = a.basis.generators[i - 1].refine(share)
        c = a.coeffs[i]
        if c > 0:
            lo += c * glo
            hi += c * ghi
        else:
            lo += c * ghi
            hi += c * glo
    return lo, hi


# --------------------------------------------------------------------------
# Exact linear algebra
# --------------------------------------------------------------------------


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


class QSubspace:
    """Q-span of finitely many ExactReals, stored as a canonical RREF matrix
    over the coordinates ``(1, g1, ..., gk)``."""

    def __init__(self, basis: GeneratorBasis, generators: Iterable[ExactReal]):
        gens = list(generators)
        for g in gens:
            if g.basis is not basis:
                raise BasisMismatchError(basis, g.basis)
        self.basis = basis
        self.generators = tuple(gens)
        self.basis_matrix, self.pivots = _rref([list(g.coeffs) for g in gens], basis.dim)
        self.basis_matrix = tuple(tuple(r) for r in self.basis_matrix)

    @property
    def rank(self) -> int:
        return len(self.basis_matrix)

    def __eq__(self, other):
        if not isinstance(other, QSubspace):
            return NotImplemented
        return self.basis is other.basis and self.basis_matrix == other.basis_matrix

    def __hash__(self):
        return hash((self.basis.id, self.basis_matrix))

    def __repr__(self):
        rows = [str(ExactReal(self.basis, r)) for r in self.basis_matrix]
        return f"QSubspace(span{{{', '.join(rows)}}})"

    def coordinates(self, x: ExactReal) -> Optional[tuple[Fraction, ...]]:
        """Unique coordinates of ``x`` over the RREF rows, or None."""
        if x.basis is not self.basis:
            raise BasisMismatchError(self.basis, x.basis)
        coords = tuple(x.coeffs[c] for c in self.pivots)
        recon = [Fraction(0)] * self.basis.dim
        for a, row in zip(coords, self.basis_matrix):
            if a:
                for j, v in enumerate(row):
                    recon[j] += a * v
        return coords if tuple(recon) == x.coeffs else None

    def contains(self, x: ExactReal) -> bool:
        return self.coordinates(x) is not None

    def issubspace(self, other: "QSubspace") -> bool:
        return all(other.contains(ExactReal(self.basis, r)) for r in self.basis_matrix)

    def membership(self, x: ExactReal) -> Optional[tuple[Fraction, ...]]:
        """Coefficients ``c`` over the originating generators with
        ``x == sum(c_i * gen_i)`` (free generators get 0), or None."""
        if x.basis is not self.basis:
            raise BasisMismatchError(self.basis, x.basis)
        n = len(self.generators)
        if n == 0:
            return () if not x else None
        # solve G^T c = x: columns are generators
        dim = self.basis.dim
        aug = [[g.coeffs[row] for g in self.generators] + [x.coeffs[row]] for row in range(dim)]
        red, pivots = _rref(aug, n + 1)
        if n in pivots:
            return None
        sol = [Fraction(0)] * n
        for row, c in zip(red, pivots):
            sol[c] = row[n]
        return tuple(sol)


def qspan_membership(V: QSubspace, x: ExactReal) -> Optional[tuple[Fraction, ...]]:
    return V.membership(x)


def _hnf_with_transform(rows: list[list[int]]) -> tuple[list[list[int]], list[list[int]], int]:
    """Integer row echelon form ``H = U @ rows`` with U unimodular.

    Returns ``(H, U, rank)``; rows ``rank..`` of H are zero and the matching
    rows of U span the integer relations among the input rows."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    H = [list(r) for r in rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(H[i][c]))
            H[r], H[piv] = H[piv], H[r]
            U[r], U[piv] = U[piv], U[r]
            done = True
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if r < m and H[r][c] != 0:
            if H[r][c] < 0:
                H[r] = [-a for a in H[r]]
                U[r] = [-a for a in U[r]]
            for i in range(r):
                q = H[i][c] // H[r][c]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
            r += 1
    return H, U, r


class FgSubgroup:
    """The subgroup of R generated by finitely many ExactReals.

    Membership is decided exactly by integer row reduction of the
    generators' coefficient vectors (a Z-lattice in Q^(k+1))."""

    def __init__(self, basis: GeneratorBasis, generators: Iterable[ExactReal] = ()):
        gens = list(generators)
        for g in gens:
            if g.basis is not basis:
                raise BasisMismatchError(basis, g.basis)
        self.basis = basis
        self.generators = tuple(gens)
        self._qspan: Optional[QSubspace] = None
        self._lattice = None

    def __repr__(self):
        return f"FgSubgroup(<{', '.join(map(str, self.generators)) or '0'}>)"

    @classmethod
    def of(cls, *generators: ExactReal) -> "FgSubgroup":
        if not generators:
            raise ValueError("use FgSubgroup(basis) for the zero group")
        return cls(generators[0].basis, generators)

    @property
    def qspan(self) -> QSubspace:
        if self._qspan is None:
            self._qspan = QSubspace(self.basis, self.generators)
        return self._qspan

    def _lattice_data(self):
        if self._lattice is None:
            den = 1
            for g in self.generators:
                for c in g.coeffs:
                    den = den * c.denominator // math.gcd(den, c.denominator)
            ints = [[int(c * den) for c in g.coeffs] for g in self.generators]
            H, U, rank = _hnf_with_transform(ints)
            pivots = []
            for row in H[:rank]:
                pivots.append(next(j for j, v in enumerate(row) if v))
            self._lattice = (den, H[:rank], U[:rank], pivots)
        return self._lattice

    def membership(self, x: ExactReal) -> Optional[tuple[int, ...]]:
        """Integer ``n`` with ``x == sum(n_i * gen_i)``, or None."""
        if x.basis is not self.basis:
            raise BasisMismatchError(self.basis, x.basis)
        if not self.generators:
            return () if not x else None
        den, H, U, pivots = self._lattice_data()
        v = [c * den for c in x.coeffs]
        if any(c.denominator != 1 for c in v):
            return None
        v = [int(c) for c in v]
        coef = []
        for row, p in zip(H, pivots):
            if v[p] % row[p]:
                return None
            k = v[p] // row[p]
            coef.append(k)
            if k:
                v = [a - k * b for a, b in zip(v, row)]
        if any(v):
            return None
        n = [0] * len(self.generators)
        for k, urow in zip(coef, U):
            if k:
                for i, u in enumerate(urow):
                    n[i] += k * u
        return tuple(n)

    def contains(self, x: ExactReal) -> bool:
        return self.membership(x) is not None

    def combine(self, n: Sequence[int]) -> ExactReal:
        total = self.basis.zero()
        for k, g in zip(n, self.generators):
            if k:
                total = total + exact_scale(g, k)
        return total

    def lattice_basis(self) -> list[ExactReal]:
        """A Z-basis of the subgroup (Hermite-reduced)."""
        if not self.generators:
            return []
        den, H, _, _ = self._lattice_data()
        return [ExactReal(self.basis, tuple(Fraction(v, den) for v in row)) for row in H]

    def issubgroup(self, other: "FgSubgroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def scale(self, c: Union[ExactReal, RationalLike]) -> "FgSubgroup":
        if isinstance(c, ExactReal):
            return FgSubgroup(self.basis, [exact_mul(c, g) for g in self.generators])
        return FgSubgroup(self.basis, [exact_scale(g, c) for g in self.generators])

    def __add__(self, other: "FgSubgroup") -> "FgSubgroup":
        if other.basis is not self.basis:
            raise BasisMismatchError(self.basis, other.basis)
        return FgSubgroup(self.basis, self.generators + other.generators)


def subgroup_membership(G: FgSubgroup, x: ExactReal) -> Optional[tuple[int, ...]]:
    return G.membership(x)


def qspan_of(G: FgSubgroup) -> QSubspace:
    return G.qspan
