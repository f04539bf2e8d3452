"""Exact arithmetic over rationals and real quadratic-surd sums.

A surd is a number ``q*sqrt(d)`` with rational ``q`` and squarefree positive
integer ``d``; a surd sum is a finite sum of surds with pairwise distinct
radicands.  Surd sums are closed under ring operations and, because each
radicand can be conjugated away, under exact inversion.  They serve as the
coefficient field for every symbolic computation in this package.

Canonical form: radicands are squarefree and distinct, no zero terms are
stored, and the rational part uses radicand ``1``.  Equal values always have
identical representations, so structural equality is value equality.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Mapping, Union

import mpmath

#: Rational numbers are plain ``fractions.Fraction`` values: the stdlib type
#: already maintains the invariants (positive denominator, reduced form).
Rational = Fraction

#: Inversion conjugates one radicand at a time; past this many independent
#: radicands the conjugation blow-up stops being worth supporting exactly.
MAX_RADICANDS = 8

RationalLike = Union[int, Fraction]
SurdLike = Union[int, Fraction, "Surd", "SurdSum"]


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedExtensionError(ValueError):
    """Too many independent radicands for exact field inversion."""


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Split ``n > 0`` as ``k*k*d`` with ``d`` squarefree; return ``(k, d)``."""
    if n <= 0:
        raise DomainError(f"squarefree decomposition needs n > 0, got {n}")
    k, d = 1, 1
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            k *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    return k, d * m


def _smallest_prime_factor(n: int) -> int:
    p = 2
    while p * p <= n:
        if n % p == 0:
            return p
        p += 1 if p == 2 else 2
    return n


def _format_rational(q: Fraction) -> str:
    return str(q)


class Surd:
    """A single term ``coeff*sqrt(radicand)`` in canonical form.

    ``radicand`` is a squarefree positive integer; ``radicand == 1`` encodes a
    pure rational.  The canonical zero is ``Surd(0, 1)``.
    """

    __slots__ = ("coeff", "radicand")

    def __init__(self, coeff: RationalLike, radicand: int = 1):
        coeff = Fraction(coeff)
        if radicand <= 0:
            raise DomainError(f"radicand must be positive, got {radicand}")
        k, d = squarefree_decompose(radicand)
        if k != 1:
            raise DomainError(f"radicand must be squarefree, got {radicand}")
        if coeff == 0:
            radicand = d = 1
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "radicand", d)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Surd is immutable")

    @classmethod
    def from_square(cls, square: RationalLike) -> "Surd":
        """The positive surd whose square is ``square`` (must be > 0)."""
        square = Fraction(square)
        if square <= 0:
            raise DomainError(f"need a positive square, got {square}")
        return surd_normalize(1, square)

    @property
    def is_zero(self) -> bool:
        return self.coeff == 0

    @property
    def is_rational(self) -> bool:
        return self.radicand == 1

    def square(self) -> Fraction:
        return self.coeff * self.coeff * self.radicand

    def __mul__(self, other):
        if isinstance(other, Surd):
            g = gcd(self.radicand, other.radicand)
            return Surd(self.coeff * other.coeff * g,
                        self.radicand * other.radicand // (g * g))
        if isinstance(other, (int, Fraction)):
            return Surd(self.coeff * other, self.radicand)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Surd):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            return Surd(self.coeff / other, self.radicand)
        return NotImplemented

    def __neg__(self) -> "Surd":
        return Surd(-self.coeff, self.radicand)

    def inverse(self) -> "Surd":
        """Exact reciprocal: ``1/(q*sqrt(d)) = (1/(q*d))*sqrt(d)``."""
        if self.coeff == 0:
            raise ZeroDivisionError("inverse of zero surd")
        return Surd(Fraction(1, 1) / (self.coeff * self.radicand), self.radicand)

    def to_surdsum(self) -> "SurdSum":
        return SurdSum({self.radicand: self.coeff})

    def __eq__(self, other) -> bool:
        if isinstance(other, Surd):
            return self.coeff == other.coeff and self.radicand == other.radicand
        if isinstance(other, (int, Fraction)):
            return self.radicand == 1 and self.coeff == other
        if isinstance(other, SurdSum):
            return self.to_surdsum() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.radicand == 1:
            return hash(self.coeff)
        return hash((self.coeff, self.radicand))

    def __float__(self) -> float:
        return float(self.to_surdsum())

    def __str__(self) -> str:
        if self.radicand == 1:
            return _format_rational(self.coeff)
        if self.coeff == 1:
            return f"sqrt({self.radicand})"
        if self.coeff == -1:
            return f"-sqrt({self.radicand})"
        return f"{_format_rational(self.coeff)}*sqrt({self.radicand})"

    def __repr__(self) -> str:
        return f"Surd({self.coeff!r}, {self.radicand})"


def surd_normalize(q: RationalLike, r: RationalLike) -> Surd:
    """Rewrite ``q*sqrt(r)`` (rational ``r > 0``) as ``c*sqrt(d)``, d squarefree."""
    q = Fraction(q)
    r = Fraction(r)
    if r <= 0:
        raise DomainError(f"radicand must be positive, got {r}")
    k, d = squarefree_decompose(r.numerator * r.denominator)
    return Surd(q * Fraction(k, r.denominator), d)


class SurdSum:
    """A finite sum of surds with distinct squarefree radicands.

    Immutable and canonical: no zero terms, radicands squarefree and distinct.
    Supports ``+ - * / **`` against ints, Fractions, Surds and SurdSums.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, RationalLike] | None = None):
        canonical: dict[int, Fraction] = {}
        if terms:
            for d, q in terms.items():
                q = Fraction(q)
                if q == 0:
                    continue
                k, sf = squarefree_decompose(d)
                canonical[sf] = canonical.get(sf, Fraction(0)) + q * k
                if canonical[sf] == 0:
                    del canonical[sf]
        object.__setattr__(self, "_terms", canonical)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("SurdSum is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_value(cls, value: SurdLike) -> "SurdSum":
        if isinstance(value, SurdSum):
            return value
        if isinstance(value, Surd):
            return value.to_surdsum()
        return cls({1: Fraction(value)})

    @classmethod
    def zero(cls) -> "SurdSum":
        return cls()

    @classmethod
    def one(cls) -> "SurdSum":
        return cls({1: 1})

    @classmethod
    def sqrt(cls, r: RationalLike) -> "SurdSum":
        return surd_normalize(1, r).to_surdsum()

    # -- inspection --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_rational(self) -> bool:
        return all(d == 1 for d in self._terms)

    @property
    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise DomainError(f"{self} is irrational")
        return self._terms.get(1, Fraction(0))

    def radicands(self) -> tuple[int, ...]:
        return tuple(sorted(self._terms))

    def terms(self) -> Iterator[tuple[int, Fraction]]:
        return iter(sorted(self._terms.items()))

    def coefficient(self, radicand: int) -> Fraction:
        return self._terms.get(radicand, Fraction(0))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        merged = dict(self._terms)
        for d, q in other._terms.items():
            merged[d] = merged.get(d, Fraction(0)) + q
        return SurdSum(merged)

    __radd__ = __add__

    def __neg__(self) -> "SurdSum":
        return SurdSum({d: -q for d, q in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        product: dict[int, Fraction] = {}
        for d1, q1 in self._terms.items():
            for d2, q2 in other._terms.items():
                g = gcd(d1, d2)
                d = d1 * d2 // (g * g)
                product[d] = product.get(d, Fraction(0)) + q1 * q2 * g
        return SurdSum(product)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "SurdSum":
        if not isinstance(exponent, int) or exponent < 0:
            raise DomainError("surd sums support nonnegative integer powers only")
        result = SurdSum.one()
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def inverse(self) -> "SurdSum":
        """Exact reciprocal via iterated conjugation over each radicand prime."""
        if not self._terms:
            raise ZeroDivisionError("inverse of zero surd sum")
        if len(self._terms) > MAX_RADICANDS:
            raise UnsupportedExtensionError(
                f"{len(self._terms)} radicands exceed the supported {MAX_RADICANDS}")
        return self._inverse()

    def _inverse(self) -> "SurdSum":
        if self.is_rational:
            return SurdSum({1: Fraction(1) / self._terms[1]})
        p = min(_smallest_prime_factor(d) for d in self._terms if d > 1)
        plain: dict[int, Fraction] = {}
        scaled: dict[int, Fraction] = {}
        for d, q in self._terms.items():
            if d % p == 0:
                scaled[d // p] = q
            else:
                plain[d] = q
        x = SurdSum(plain)
        y = SurdSum(scaled)
        conjugate = x - SurdSum({p: 1}) * y
        norm = x * x - y * y * p  # free of sqrt(p) by construction
        if norm.is_zero:  # pragma: no cover - conjugation is an automorphism
            raise ZeroDivisionError("conjugate norm vanished unexpectedly")
        return conjugate * norm._inverse()

    def _coerce(self, other):
        if isinstance(other, SurdSum):
            return other
        if isinstance(other, Surd):
            return other.to_surdsum()
        if isinstance(other, (int, Fraction)):
            return SurdSum({1: Fraction(other)})
        return NotImplemented

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other) -> bool:
        coerced = self._coerce(other)
        if coerced is NotImplemented:
            return NotImplemented
        return self._terms == coerced._terms

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(self._terms.get(1, Fraction(0)))
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- numeric conversion -------------------------------------------------

    def to_float(self, precision: int = 53) -> mpmath.mpf:
        """Value rounded to ``precision`` bits (32 guard bits internally)."""
        with mpmath.workprec(precision + 32):
            total = mpmath.mpf(0)
            for d, q in sorted(self._terms.items()):
                total += mpmath.mpf(q.numerator) / q.denominator * mpmath.sqrt(d)
        with mpmath.workprec(precision):
            return +total

    def __float__(self) -> float:
        return float(self.to_float(53))

    # -- text ---------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for d, q in sorted(self._terms.items()):
            body = Surd(abs(q), d) if d != 1 else None
            text = str(body) if body is not None else _format_rational(abs(q))
            if not pieces:
                pieces.append(("-" if q < 0 else "") + text)
            else:
                pieces.append(("- " if q < 0 else "+ ") + text)
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"SurdSum({self._terms!r})"


_TOKEN = re.compile(r"\s*(sqrt\(\s*(\d+)\s*\)|\d+(?:\s*/\s*\d+)?|[+*-])")


def parse_surdsum(text: str) -> SurdSum:
    """Parse the canonical textual form, e.g. ``"1/2 + 3*sqrt(2)"``."""
    pos = 0
    total = SurdSum.zero()
    sign = 1
    factors: list[SurdSum] = []

    def flush():
        nonlocal total, factors, sign
        if factors:
            term = SurdSum.one()
            for f in factors:
                term = term * f
            total = total + term * sign
        factors = []
        sign = 1

    expecting_factor = True
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            if text[pos:].strip():
                raise DomainError(f"cannot parse surd sum at: {text[pos:]!r}")
            break
        pos = match.end()
        token = match.group(1)
        if token == "+" or token == "-":
            if expecting_factor:
                sign = -sign if token == "-" else sign
            else:
                flush()
                sign = -1 if token == "-" else 1
                expecting_factor = True
        elif token == "*":
            expecting_factor = True
        elif token.startswith("sqrt"):
            factors.append(SurdSum.sqrt(int(match.group(2))))
            expecting_factor = False
        else:
            num = Fraction(token.replace(" ", ""))
            factors.append(SurdSum.from_value(num))
            expecting_factor = False
    flush()
    return total
