"""Monomial rational maps between generalized balls.

A map ``D(r,s) -> D(r',s')`` is stored as ``r'`` positive and ``s'`` negative
slots, each either empty or a monomial with a strictly positive surd
coefficient (any unit-modulus phase is absorbed by a diagonal automorphism, so
only the modulus matters).  The squared-norm balance of the map is the real
polynomial ``P(x) = sum c_k^2 x^{e_k} - sum c_k^2 x^{e_k}`` in the squared
moduli ``x_i = |z_i|^2``.

Properness is certified exactly: ``P`` must factor as ``L^m * Q`` through the
signature form ``L``, and ``Q`` must stay positive on every part of the
closed positive region where the map is still defined.  The latter is checked
stratum by stratum: for each set ``S`` of variables forced to zero, either all
slots vanish (the stratum sits inside the indeterminacy locus and imposes
nothing) or the restriction of ``Q`` must be positive on the open region of
the remaining variables.  Restrictions with nonnegative coefficients and
linear restrictions are decided exactly; any other shape falls back to seeded
exact-rational sampling, which downgrades the verdict to ``SampledPositive``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exactnum import DomainError, Rational, Surd, SurdSum, surd_normalize
from .poly import (
    NotDivisibleError,
    Polynomial,
    SignatureLinearForm,
    divide_by_signature_form,
)


class IndeterminacyPointError(ValueError):
    """The map vanishes identically at the requested point."""


class NotProperError(Exception):
    """The squared-norm balance does not certify a proper map."""

    def __init__(self, reason: str, detail: object = None):
        super().__init__(reason if detail is None else f"{reason}: {detail}")
        self.reason = reason
        self.detail = detail


class Signature:
    """Source and target block sizes of a map ``D(r,s) -> D(r',s')``."""

    __slots__ = ("r", "s", "rp", "sp")

    def __init__(self, r: int, s: int, rp: int, sp: int):
        for name, value in (("r", r), ("s", s), ("rp", rp), ("sp", sp)):
            if value < 1:
                raise DomainError(f"signature component {name} must be >= 1")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "rp", rp)
        object.__setattr__(self, "sp", sp)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Signature is immutable")

    @property
    def source_arity(self) -> int:
        return self.r + self.s

    @property
    def target_arity(self) -> int:
        return self.rp + self.sp

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.r, self.s, self.rp, self.sp)

    def __eq__(self, other) -> bool:
        return isinstance(other, Signature) and self.as_tuple() == other.as_tuple()

    def __hash__(self) -> int:
        return hash(self.as_tuple())

    def __repr__(self) -> str:
        return f"Signature(r={self.r}, s={self.s}, rp={self.rp}, sp={self.sp})"


@dataclass(frozen=True)
class MapComponent:
    """One slot of a monomial map: ``coeff * z^exponents`` with ``coeff > 0``."""

    coeff: Surd
    exponents: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.coeff, Surd):
            object.__setattr__(self, "coeff", surd_normalize(1, Fraction(self.coeff) ** 2)
                               if self.coeff > 0 else Surd(self.coeff))
        if self.coeff.coeff <= 0:
            raise DomainError("map components need strictly positive coefficients")
        object.__setattr__(self, "exponents", tuple(self.exponents))
        if any(e < 0 for e in self.exponents):
            raise DomainError("negative exponent in map component")

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def coeff_square(self) -> Fraction:
        return self.coeff.square()

    def __str__(self) -> str:
        mono = "*".join(f"z{i + 1}^{e}" if e > 1 else f"z{i + 1}"
                        for i, e in enumerate(self.exponents) if e)
        if not mono:
            return str(self.coeff)
        if self.coeff == Surd(1):
            return mono
        return f"{self.coeff}*{mono}"


Slot = Optional[MapComponent]


class MonomialBallMap:
    """A monomial rational map ``D(r,s) -> D(r',s')`` split as ``[g1 | g2]``."""

    __slots__ = ("signature", "positive", "negative")

    def __init__(self, signature: Signature, positive: Sequence[Slot],
                 negative: Sequence[Slot]):
        positive = tuple(positive)
        negative = tuple(negative)
        if len(positive) != signature.rp or len(negative) != signature.sp:
            raise DomainError("slot counts must match the target signature")
        degrees = set()
        for slot in itertools.chain(positive, negative):
            if slot is None:
                continue
            if len(slot.exponents) != signature.source_arity:
                raise DomainError("component arity must equal r + s")
            degrees.add(slot.degree)
        if len(degrees) != 1:
            raise DomainError("all nonzero components must share one degree")
        if all(slot is None for slot in positive):
            raise DomainError("at least one positive slot must be nonzero")
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "positive", positive)
        object.__setattr__(self, "negative", negative)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("MonomialBallMap is immutable")

    # -- inspection -----------------------------------------------------------

    @property
    def degree(self) -> int:
        return next(slot.degree for slot in self.slots() if slot is not None)

    def slots(self) -> Iterable[Slot]:
        return itertools.chain(self.positive, self.negative)

    def nonzero_slots(self) -> Iterable[MapComponent]:
        return (slot for slot in self.slots() if slot is not None)

    # -- core operations --------------------------------------------------------

    def squared_norm_polynomial(self) -> Polynomial:
        """``P(x) = sum |g1_k|^2 - sum |g2_k|^2`` in the squared moduli."""
        arity = self.signature.source_arity
        terms: dict[tuple[int, ...], Fraction] = {}
        for sign, block in ((1, self.positive), (-1, self.negative)):
            for slot in block:
                if slot is None:
                    continue
                key = slot.exponents
                terms[key] = terms.get(key, Fraction(0)) + sign * slot.coeff_square()
        return Polynomial(arity, terms)

    def rationally_reduce(self) -> "MonomialBallMap":
        """Strip the common monomial factor from all components."""
        common = None
        for slot in self.nonzero_slots():
            if common is None:
                common = list(slot.exponents)
            else:
                common = [min(a, b) for a, b in zip(common, slot.exponents)]
        assert common is not None
        if not any(common):
            return self

        def strip(slot: Slot) -> Slot:
            if slot is None:
                return None
            return MapComponent(slot.coeff,
                                tuple(e - c for e, c in zip(slot.exponents, common)))

        return MonomialBallMap(self.signature,
                               [strip(slot) for slot in self.positive],
                               [strip(slot) for slot in self.negative])

    def canonical_form(self) -> "MonomialBallMap":
        """Distinguished representative of the monomial-automorphism orbit.

        Minimizes over permutations of the first-block and second-block source
        variables, sorts the slots inside each target block, and rescales the
        whole map so the largest coefficient-square is 1.  Expects a rationally
        reduced map (reduction is not applied here).
        """
        sig = self.signature
        top = max(slot.coeff_square() for slot in self.nonzero_slots())
        scale = Surd.from_square(top).inverse()

        def orbit_key_and_slots(perm: Sequence[int]):
            def remap(slot: Slot):
                if slot is None:
                    return None
                exponents = tuple(slot.exponents[perm[i]]
                                  for i in range(len(perm)))
                return MapComponent(slot.coeff * scale, exponents)

            def block_sorted(block):
                mapped = [remap(slot) for slot in block]
                keyed = sorted(
                    ((0, s.exponents, s.coeff_square()) if s is not None else (1,)
                     for s in mapped))
                slots_sorted = sorted(
                    (s for s in mapped if s is not None),
                    key=lambda s: (s.exponents, s.coeff_square()))
                slots_sorted += [None] * (len(mapped) - len(slots_sorted))
                return tuple(keyed), tuple(slots_sorted)

            pos_key, pos_slots = block_sorted(self.positive)
            neg_key, neg_slots = block_sorted(self.negative)
            return (pos_key, neg_key), (pos_slots, neg_slots)

        best_key = None
        best_slots = None
        for first in itertools.permutations(range(sig.r)):
            for second in itertools.permutations(range(sig.r, sig.r + sig.s)):
                perm = tuple(first) + tuple(second)
                key, slots = orbit_key_and_slots(perm)
                if best_key is None or key < best_key:
                    best_key, best_slots = key, slots
        assert best_slots is not None
        return MonomialBallMap(sig, best_slots[0], best_slots[1])

    def numeric_eval(self, point: Sequence[complex]) -> list[complex]:
        """Evaluate the homogeneous components at a numeric point."""
        if len(point) != self.signature.source_arity:
            raise DomainError("point length must equal r + s")
        if not any(abs(v) > 0 for v in point):
            raise DomainError("projective points cannot be identically zero")
        values: list[complex] = []
        for slot in self.slots():
            if slot is None:
                values.append(0j)
                continue
            acc = complex(float(slot.coeff))
            for v, e in zip(point, slot.exponents):
                if e:
                    acc *= complex(v) ** e
            values.append(acc)
        if all(abs(v) == 0 for v in values):
            raise IndeterminacyPointError(
                "the map is indeterminate at this point")
        return values

    # -- serialization ------------------------------------------------------------

    def to_json(self) -> dict:
        def slot_json(slot: Slot):
            if slot is None:
                return None
            return {"coeff": {"rat": str(slot.coeff.coeff),
                              "sqrt": slot.coeff.radicand},
                    "exp": list(slot.exponents)}

        return {"r": self.signature.r, "s": self.signature.s,
                "rp": self.signature.rp, "sp": self.signature.sp,
                "positive": [slot_json(s) for s in self.positive],
                "negative": [slot_json(s) for s in self.negative]}

    @classmethod
    def from_json(cls, data: dict) -> "MonomialBallMap":
        sig = Signature(data["r"], data["s"], data["rp"], data["sp"])

        def slot_from(obj) -> Slot:
            if obj is None:
                return None
            coeff = obj["coeff"]
            return MapComponent(Surd(Fraction(coeff["rat"]),
                                     int(coeff.get("sqrt", 1))),
                                tuple(obj["exp"]))

        return cls(sig, [slot_from(o) for o in data["positive"]],
                   [slot_from(o) for o in data["negative"]])

    # -- comparison -----------------------------------------------------------------

    def _key(self):
        def slot_key(slot: Slot):
            if slot is None:
                return None
            return (slot.coeff.coeff, slot.coeff.radicand, slot.exponents)

        return (self.signature.as_tuple(),
                tuple(slot_key(s) for s in self.positive),
                tuple(slot_key(s) for s in self.negative))

    def __eq__(self, other) -> bool:
        return isinstance(other, MonomialBallMap) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __str__(self) -> str:
        pos = ", ".join(str(s) if s is not None else "0" for s in self.positive)
        neg = ", ".join(str(s) if s is not None else "0" for s in self.negative)
        return f"[{pos} | {neg}]"

    def __repr__(self) -> str:
        return f"MonomialBallMap({self!s})"


# -- positivity verdicts ------------------------------------------------------------


@dataclass(frozen=True)
class NonnegCoeffs:
    """Every coefficient of the cofactor is nonnegative: positivity is exact."""


@dataclass(frozen=True)
class ExactLinear:
    """Cofactor is linear; positivity decided by exact extreme-ray analysis."""


@dataclass(frozen=True)
class SampledPositive:
    trials: int
    seed: int


@dataclass(frozen=True)
class FailedAt:
    point: tuple[Fraction, ...]


PositivityVerdict = NonnegCoeffs | ExactLinear | SampledPositive | FailedAt


@dataclass(frozen=True)
class PropernessCertificate:
    """Factorization data ``P = L^m * q_p`` plus a positivity verdict."""

    m: int
    q_p: Polynomial
    positivity: PositivityVerdict
    signature: Signature

    @property
    def is_positive(self) -> bool:
        return not isinstance(self.positivity, FailedAt)

    def to_json(self) -> dict:
        verdict: dict[str, object]
        if isinstance(self.positivity, NonnegCoeffs):
            verdict = {"kind": "NonnegCoeffs"}
        elif isinstance(self.positivity, ExactLinear):
            verdict = {"kind": "ExactLinear"}
        elif isinstance(self.positivity, SampledPositive):
            verdict = {"kind": "SampledPositive",
                       "trials": self.positivity.trials,
                       "seed": self.positivity.seed}
        else:
            verdict = {"kind": "FailedAt",
                       "point": [str(v) for v in self.positivity.point]}
        return {"m": self.m, "q_p": self.q_p.to_text(),
                "positivity": verdict, "proper": self.is_positive}


def _interior_direction(first: Sequence[int], last: Sequence[int],
                        arity: int) -> list[Fraction]:
    """A rational direction strictly inside the positivity cone."""
    direction = [Fraction(0)] * arity
    for i in first:
        direction[i] = Fraction(len(last) + 1)
    for j in last:
        direction[j] = Fraction(1)
    return direction


def linear_positive_on_region(
        coefficients: Sequence[Fraction], first: Sequence[int],
        last: Sequence[int]) -> Optional[tuple[Fraction, ...]]:
    """Exact positivity of a linear form on the open region.

    The region is ``{x_i > 0 for i in first+last, sum_first > sum_last}``; its
    closure is the cone spanned by the rays ``e_i (i in first)`` and
    ``e_i + e_j (i in first, j in last)``.  Returns ``None`` when positive,
    otherwise an exact interior witness where the form is <= 0.
    """
    arity = len(coefficients)
    direction = _interior_direction(first, last, arity)

    def witness_from_ray(ray: list[Fraction]) -> tuple[Fraction, ...]:
        ray_value = sum(c * v for c, v in zip(coefficients, ray))
        dir_value = sum(c * v for c, v in zip(coefficients, direction))
        if ray_value < 0:
            eps = -ray_value / (2 * (abs(dir_value) + 1))
        else:  # form vanishes identically: any interior point works
            eps = Fraction(1)
        return tuple(r + eps * d for r, d in zip(ray, direction))

    if all(c == 0 for c in coefficients):
        return witness_from_ray([Fraction(0)] * arity)
    for i in first:
        if coefficients[i] < 0:
            ray = [Fraction(0)] * arity
            ray[i] = Fraction(1)
            return witness_from_ray(ray)
    for i in first:
        for j in last:
            if coefficients[i] + coefficients[j] < 0:
                ray = [Fraction(0)] * arity
                ray[i] = ray[j] = Fraction(1)
                return witness_from_ray(ray)
    return None


def _sample_region_point(rng: random.Random, first: Sequence[int],
                         last: Sequence[int], arity: int) -> list[Fraction]:
    point = [Fraction(0)] * arity
    for index in itertools.chain(first, last):
        point[index] = Fraction(rng.randint(1, 99), 100)
    deficit = sum(point[j] for j in last) - sum(point[i] for i in first)
    if deficit >= 0:
        bump = (deficit + Fraction(rng.randint(1, 99), 100)) / len(first)
        for i in first:
            point[i] += bump
    return point


def properness_certificate(g: MonomialBallMap, positivity_trials: int = 400,
                           seed: int = 2024) -> PropernessCertificate:
    """Factor the norm balance through the signature form and decide positivity.

    Raises :class:`NotProperError` when the balance polynomial does not factor
    (or vanishes identically).  A factorable balance whose cofactor fails
    positivity on some definable stratum yields a certificate carrying
    ``FailedAt`` with an exact interior witness.
    """
    sig = g.signature
    form = SignatureLinearForm(sig.r, sig.s)
    balance = g.squared_norm_polynomial()
    if balance.is_zero:
        raise NotProperError("zero_balance",
                             "positive and negative slots cancel identically")
    try:
        m, cofactor = divide_by_signature_form(balance, form)
    except NotDivisibleError as exc:
        raise NotProperError("not_divisible", str(exc)) from exc

    arity = sig.source_arity
    supports = [frozenset(i for i, e in enumerate(slot.exponents) if e)
                for slot in g.nonzero_slots()]
    sampled = False
    failure: Optional[FailedAt] = None

    for bits in range(1 << arity):
        dead = frozenset(i for i in range(arity) if bits & (1 << i))
        if not any(support.isdisjoint(dead) for support in supports):
            continue  # entire stratum is indeterminate
        first = [i for i in range(sig.r) if i not in dead]
        last = [j for j in range(sig.r, arity) if j not in dead]
        if not first:
            continue  # no interior points over this stratum
        restricted = cofactor.zero_out(dead)
        if restricted.is_zero:
            failure = FailedAt(tuple(_interior_direction(first, last, arity)))
            break
        if restricted.has_nonnegative_coefficients():
            continue
        degree = restricted.total_degree()
        if degree == 0:
            if restricted.coefficient((0,) * arity) < 0:
                failure = FailedAt(tuple(_interior_direction(first, last, arity)))
                break
            continue
        if degree == 1:
            coefficients = [restricted.coefficient(
                tuple(1 if k == i else 0 for k in range(arity)))
                for i in range(arity)]
            witness = linear_positive_on_region(coefficients, first, last)
            if witness is not None:
                failure = FailedAt(witness)
                break
            continue
        sampled = True
        rng = random.Random(seed * 1_000_003 + bits)
        bad = None
        for _ in range(positivity_trials):
            point = _sample_region_point(rng, first, last, arity)
            if restricted.evaluate(point) <= 0:
                bad = tuple(point)
                break
        if bad is not None:
            failure = FailedAt(bad)
            break

    if failure is not None:
        verdict: PositivityVerdict = failure
    elif sampled:
        verdict = SampledPositive(positivity_trials, seed)
    elif cofactor.has_nonnegative_coefficients():
        verdict = NonnegCoeffs()
    else:
        verdict = ExactLinear()
    return PropernessCertificate(m, cofactor, verdict, sig)
