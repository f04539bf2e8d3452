"""Sparse multivariate polynomials over exact coefficients.

Terms are keyed by exponent tuples; coefficients are ``Fraction`` or
``SurdSum`` values, normalized so that a rational-valued coefficient is always
stored as a ``Fraction``.  The monomial order used everywhere (leading terms,
quotients, text rendering) is lex with ``x1 > x2 > ...``.

The one non-generic operation here is exact division by a signature linear
form ``x1 + ... + xr - x(r+1) - ... - x(r+s)``: divisibility is decided by the
remainder-zero substitution ``x1 <- -(x2+...+xr) + x(r+1)+...+x(r+s)`` and the
quotient is produced by term-wise long division.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .exactnum import DomainError, Surd, SurdSum, parse_surdsum

Exponents = tuple[int, ...]
Coeff = Union[Fraction, SurdSum]
CoeffLike = Union[int, Fraction, Surd, SurdSum]


class ArityError(ValueError):
    """Operands disagree on the number of variables."""


class NotDivisibleError(ArithmeticError):
    """Exact polynomial division left a nonzero remainder."""


def normalize_coeff(value: CoeffLike) -> Coeff:
    """Coerce to the canonical coefficient type (Fraction when rational)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Surd):
        return value.coeff if value.radicand == 1 else value.to_surdsum()
    if isinstance(value, SurdSum):
        return value.rational_value if value.is_rational else value
    raise TypeError(f"unsupported coefficient {value!r}")


def coeff_inverse(value: Coeff) -> Coeff:
    if isinstance(value, Fraction):
        return Fraction(1) / value
    return value.inverse()


class Polynomial:
    """Immutable sparse polynomial with a fixed arity."""

    __slots__ = ("arity", "_terms")

    def __init__(self, arity: int,
                 terms: Mapping[Exponents, CoeffLike] |
                 Iterable[tuple[Exponents, CoeffLike]] = ()):
        if arity < 0:
            raise ArityError(f"arity must be nonnegative, got {arity}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        canonical: dict[Exponents, Coeff] = {}
        for exponents, coeff in items:
            exponents = tuple(exponents)
            if len(exponents) != arity or any(e < 0 for e in exponents):
                raise ArityError(
                    f"exponent vector {exponents} invalid for arity {arity}")
            coeff = normalize_coeff(coeff)
            if exponents in canonical:
                coeff = canonical[exponents] + coeff
                coeff = normalize_coeff(coeff)
            if coeff == 0:
                canonical.pop(exponents, None)
            else:
                canonical[exponents] = coeff
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "_terms", canonical)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Polynomial is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, arity: int) -> "Polynomial":
        return cls(arity)

    @classmethod
    def constant(cls, arity: int, value: CoeffLike) -> "Polynomial":
        return cls(arity, {(0,) * arity: value})

    @classmethod
    def variable(cls, arity: int, index: int) -> "Polynomial":
        if not 0 <= index < arity:
            raise ArityError(f"variable {index} out of range for arity {arity}")
        exponents = [0] * arity
        exponents[index] = 1
        return cls(arity, {tuple(exponents): 1})

    @classmethod
    def monomial(cls, arity: int, exponents: Sequence[int],
                 coeff: CoeffLike = 1) -> "Polynomial":
        return cls(arity, {tuple(exponents): coeff})

    # -- inspection -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self._terms)

    def count_monomials(self) -> int:
        """Number of stored (nonzero) terms; 0 for the zero polynomial."""
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> Iterator[tuple[Exponents, Coeff]]:
        """Terms in descending lex order (x1 > x2 > ...)."""
        return iter(sorted(self._terms.items(), reverse=True))

    def coefficient(self, exponents: Sequence[int]) -> Coeff:
        return self._terms.get(tuple(exponents), Fraction(0))

    def leading_term(self) -> tuple[Exponents, Coeff]:
        if not self._terms:
            raise DomainError("zero polynomial has no leading term")
        exponents = max(self._terms)
        return exponents, self._terms[exponents]

    def total_degree(self) -> int:
        """Maximal term degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def is_homogeneous(self) -> bool:
        degrees = {sum(e) for e in self._terms}
        return len(degrees) <= 1

    def degree_in(self, index: int) -> int:
        if not self._terms:
            return -1
        return max(e[index] for e in self._terms)

    def count_max_degree_monomials(self, index: int) -> int:
        """Number of terms attaining the maximal degree in variable ``index``."""
        if not self._terms:
            raise DomainError("undefined for the zero polynomial")
        top = self.degree_in(index)
        return sum(1 for e in self._terms if e[index] == top)

    def has_nonnegative_coefficients(self) -> bool:
        return all(isinstance(c, Fraction) and c >= 0
                   for c in self._terms.values())

    # -- ring operations -------------------------------------------------------

    def _check_arity(self, other: "Polynomial") -> None:
        if self.arity != other.arity:
            raise ArityError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_arity(other)
        merged = dict(self._terms)
        for exponents, coeff in other._terms.items():
            merged[exponents] = merged.get(exponents, Fraction(0)) + coeff
        return Polynomial(self.arity, merged)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.arity,
                          {e: -c for e, c in self._terms.items()})

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
        if isinstance(other, (int, Fraction, Surd, SurdSum)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_arity(other)
        product: dict[Exponents, Coeff] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                product[key] = product.get(key, Fraction(0)) + c1 * c2
        return Polynomial(self.arity, product)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Surd, SurdSum)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise DomainError("polynomial powers take nonnegative integers")
        result = Polynomial.constant(self.arity, 1)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, value: CoeffLike) -> "Polynomial":
        value = normalize_coeff(value)
        if value == 0:
            return Polynomial.zero(self.arity)
        return Polynomial(self.arity,
                          {e: c * value for e, c in self._terms.items()})

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction, Surd, SurdSum)):
            return Polynomial.constant(self.arity, other)
        return NotImplemented

    # -- structural operations ---------------------------------------------------

    def expand_in_variable(self, index: int) -> list["Polynomial"]:
        """Coefficients ``[A0 ... Ad]`` of powers of ``x_index``; each free of it.

        Recombining ``sum(A_l * x_index^l)`` returns the input exactly.
        """
        top = max(self.degree_in(index), 0)
        layers: list[dict[Exponents, Coeff]] = [dict() for _ in range(top + 1)]
        for exponents, coeff in self._terms.items():
            stripped = list(exponents)
            power = stripped[index]
            stripped[index] = 0
            layers[power][tuple(stripped)] = coeff
        return [Polynomial(self.arity, layer) for layer in layers]

    def substitute(self, index: int, replacement: "Polynomial") -> "Polynomial":
        """Replace variable ``index`` by ``replacement`` (same arity)."""
        self._check_arity(replacement)
        powers: dict[int, Polynomial] = {0: Polynomial.constant(self.arity, 1)}
        result = Polynomial.zero(self.arity)
        for exponents, coeff in self._terms.items():
            power = exponents[index]
            if power not in powers:
                top = max(powers)
                acc = powers[top]
                for p in range(top + 1, power + 1):
                    acc = acc * replacement
                    powers[p] = acc
            stripped = list(exponents)
            stripped[index] = 0
            result = result + powers[power] * Polynomial.monomial(
                self.arity, stripped, coeff)
        return result

    def zero_out(self, indices: Iterable[int]) -> "Polynomial":
        """Set the given variables to zero (drop every term touching them)."""
        dead = set(indices)
        return Polynomial(self.arity,
                          {e: c for e, c in self._terms.items()
                           if all(e[i] == 0 for i in dead)})

    def embed(self, arity: int, offset: int) -> "Polynomial":
        """View in a larger variable space, shifting variables by ``offset``."""
        if offset < 0 or offset + self.arity > arity:
            raise ArityError("embedding window out of range")
        pad_left = (0,) * offset
        pad_right = (0,) * (arity - offset - self.arity)
        return Polynomial(arity, {pad_left + e + pad_right: c
                                  for e, c in self._terms.items()})

    def evaluate(self, point: Sequence):
        """Evaluate exactly (Fraction/SurdSum entries) or numerically."""
        if len(point) != self.arity:
            raise ArityError(
                f"point length {len(point)} != arity {self.arity}")
        numeric = any(isinstance(v, (float, complex)) for v in point)
        if numeric:
            values = [complex(v) if not isinstance(v, (int, float, complex))
                      else v for v in point]
            acc = 0.0 + 0.0j
            for exponents, coeff in self._terms.items():
                term = complex(float(coeff)) if not isinstance(coeff, Fraction) \
                    else complex(coeff)
                for v, e in zip(values, exponents):
                    if e:
                        term *= v ** e
                acc += term
            return acc
        acc = Fraction(0)
        for exponents, coeff in self._terms.items():
            term = coeff
            for v, e in zip(point, exponents):
                if e:
                    term = term * (v ** e)
            acc = acc + term
        return acc

    # -- comparison ---------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Surd, SurdSum)):
            other = Polynomial.constant(self.arity, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.arity == other.arity and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.arity, frozenset(self._terms.items())))

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- text ------------------------------------------------------------------------

    def to_text(self, names: Sequence[str] | None = None,
                prefix: str = "x") -> str:
        if names is None:
            names = [f"{prefix}{i + 1}" for i in range(self.arity)]
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for exponents, coeff in self.terms():
            mono = "*".join(
                f"{names[i]}^{e}" if e > 1 else names[i]
                for i, e in enumerate(exponents) if e)
            sign = ""
            if isinstance(coeff, Fraction):
                sign = "-" if coeff < 0 else "+"
                magnitude = abs(coeff)
                if magnitude == 1 and mono:
                    body = mono
                else:
                    body = str(magnitude) + (f"*{mono}" if mono else "")
            else:
                terms = list(coeff.terms())
                if len(terms) == 1:
                    d, q = terms[0]
                    sign = "-" if q < 0 else "+"
                    body = str(Surd(abs(q), d)) + (f"*{mono}" if mono else "")
                else:
                    sign = "+"
                    body = f"({coeff})" + (f"*{mono}" if mono else "")
            if not pieces:
                pieces.append(("-" if sign == "-" else "") + body)
            else:
                pieces.append(("- " if sign == "-" else "+ ") + body)
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Polynomial({self.arity}, {self.to_text()!r})"


_POLY_TOKEN = re.compile(
    r"\s*(\(|\)|\^|\*|\+|-|sqrt\(\s*\d+\s*\)|[A-Za-z]+\d+|\d+(?:/\d+)?)")


def parse_polynomial(text: str, arity: int, prefix: str = "x",
                     names: Sequence[str] | None = None) -> Polynomial:
    """Parse the canonical rendering back into a :class:`Polynomial`.

    Accepts the grammar emitted by :meth:`Polynomial.to_text`: ``+``/``-``
    separated terms of ``*``-joined factors, where a factor is a rational, a
    ``sqrt(d)``, a parenthesized surd sum, or ``<name>[^k]``.
    """
    if names is None:
        names = [f"{prefix}{i + 1}" for i in range(arity)]
    index_of = {name: i for i, name in enumerate(names)}

    tokens: list[str] = []
    pos = 0
    while pos < len(text):
        match = _POLY_TOKEN.match(text, pos)
        if not match:
            if text[pos:].strip():
                raise DomainError(f"cannot tokenize polynomial at {text[pos:]!r}")
            break
        tokens.append(match.group(1).replace(" ", ""))
        pos = match.end()

    terms: dict[Exponents, Coeff] = {}
    i = 0
    n = len(tokens)

    def flush(sign: int, coeff, exponents: list[int]) -> None:
        key = tuple(exponents)
        value = normalize_coeff(coeff * sign)
        existing = terms.get(key, Fraction(0))
        total = normalize_coeff(existing + value)
        if total == 0:
            terms.pop(key, None)
        else:
            terms[key] = total

    while i < n:
        sign = 1
        while i < n and tokens[i] in "+-":
            if tokens[i] == "-":
                sign = -sign
            i += 1
        if i >= n:
            break
        coeff: Coeff = Fraction(1)
        exponents = [0] * arity
        saw_factor = False
        while i < n:
            token = tokens[i]
            if token == "(":
                depth = 1
                j = i + 1
                while j < n and depth:
                    depth += tokens[j] == "("
                    depth -= tokens[j] == ")"
                    j += 1
                if depth:
                    raise DomainError("unbalanced parenthesis in polynomial")
                inner = " ".join(tokens[i + 1:j - 1])
                coeff = coeff * parse_surdsum(inner)
                i = j
            elif token.startswith("sqrt"):
                coeff = coeff * parse_surdsum(token)
                i += 1
            elif token in index_of:
                power = 1
                if i + 2 < n and tokens[i + 1] == "^":
                    power = int(tokens[i + 2])
                    i += 2
                elif i + 1 < n and tokens[i + 1] == "^":
                    raise DomainError("dangling exponent")
                exponents[index_of[token]] += power
                i += 1
            elif re.fullmatch(r"\d+(/\d+)?", token):
                coeff = coeff * Fraction(token)
                i += 1
            else:
                break
            saw_factor = True
            if i < n and tokens[i] == "*":
                i += 1
        if not saw_factor:
            raise DomainError("empty term in polynomial text")
        flush(sign, coeff, exponents)
    return Polynomial(arity, terms)


class SignatureLinearForm:
    """The linear form ``x1 + ... + xr - x(r+1) - ... - x(r+s)``."""

    __slots__ = ("r", "s")

    def __init__(self, r: int, s: int):
        if r < 1 or s < 1:
            raise DomainError("signature components must be positive")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("SignatureLinearForm is immutable")

    @property
    def arity(self) -> int:
        return self.r + self.s

    def polynomial(self) -> Polynomial:
        terms = {}
        for i in range(self.arity):
            exponents = [0] * self.arity
            exponents[i] = 1
            terms[tuple(exponents)] = 1 if i < self.r else -1
        return Polynomial(self.arity, terms)

    def pivot_substitution(self) -> Polynomial:
        """The solution of ``L = 0`` for ``x1``, as a polynomial in the rest."""
        terms = {}
        for i in range(1, self.arity):
            exponents = [0] * self.arity
            exponents[i] = 1
            terms[tuple(exponents)] = -1 if i < self.r else 1
        return Polynomial(self.arity, terms)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SignatureLinearForm)
                and (self.r, self.s) == (other.r, other.s))

    def __hash__(self) -> int:
        return hash((self.r, self.s))

    def __repr__(self) -> str:
        return f"SignatureLinearForm({self.r}, {self.s})"


def exact_div(numerator: Polynomial, divisor: Polynomial) -> Polynomial:
    """Exact multivariate division in lex order; raises if not divisible."""
    if numerator.arity != divisor.arity:
        raise ArityError("arity mismatch in division")
    if divisor.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    lead_exp, lead_coeff = divisor.leading_term()
    lead_inv = coeff_inverse(lead_coeff)
    remainder = numerator
    quotient: dict[Exponents, Coeff] = {}
    while not remainder.is_zero:
        top_exp, top_coeff = remainder.leading_term()
        delta = tuple(a - b for a, b in zip(top_exp, lead_exp))
        if any(d < 0 for d in delta):
            raise NotDivisibleError(
                f"{numerator} is not divisible by {divisor}")
        factor = normalize_coeff(top_coeff * lead_inv)
        quotient[delta] = factor
        remainder = remainder - divisor * Polynomial.monomial(
            numerator.arity, delta, factor)
    return Polynomial(numerator.arity, quotient)


def divide_by_signature_form(p: Polynomial,
                             form: SignatureLinearForm) -> tuple[int, Polynomial]:
    """Write ``p = L^m * q`` with maximal ``m >= 1``; raise if ``m`` would be 0.

    Divisibility at each stage is decided by the exact substitution that kills
    ``L`` (remainder-zero test); the quotient comes from term-wise division.
    """
    if p.arity != form.arity:
        raise ArityError(
            f"polynomial arity {p.arity} != form arity {form.arity}")
    if p.is_zero:
        raise DomainError("cannot factor the zero polynomial")
    if not p.is_homogeneous():
        raise DomainError("divide_by_signature_form needs homogeneous input")
    replacement = form.pivot_substitution()
    linear = form.polynomial()
    m = 0
    quotient = p
    while quotient.substitute(0, replacement).is_zero:
        quotient = exact_div(quotient, linear)
        m += 1
        if quotient.is_zero:  # pragma: no cover - impossible for p != 0
            break
    if m == 0:
        raise NotDivisibleError("not divisible by the signature form")
    return m, quotient
