"""Classification of proper monomial maps at desk scale.

Three layers live here:

* an exact case analysis producing every linear cofactor ``a1*x1 + ... + a4*x4``
  that can appear for a degree-2 map ``D(2,2) -> D(3,3)`` (at most 6 monomials
  in the balance polynomial, positivity on the region),
* the degree-2 classifier built on top of it, and
* a brute-force slot-enumeration oracle plus randomized harnesses for the
  monomial-count bounds the classification leans on.

The case analysis is a decision procedure rather than a transcription: for
every vanishing pattern (a subset of coefficients forced to zero plus a subset
of cross-term coefficients forced to cancel) it solves the exact linear
system, keeps one-dimensional solution spaces as projective candidates, and
checks the monomial count and positivity constraints on each candidate.
Higher-dimensional solution spaces are probed with random members to confirm
they contribute no solution families.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

from .ballmap import (
    ExactLinear,
    MapComponent,
    MonomialBallMap,
    NonnegCoeffs,
    NotProperError,
    SampledPositive,
    Signature,
    linear_positive_on_region,
    properness_certificate,
)
from .exactnum import DomainError, Surd
from .poly import Polynomial, SignatureLinearForm, divide_by_signature_form


class InfeasibleError(ValueError):
    """A cofactor requires more slots than the target signature offers."""


class ScaleError(ValueError):
    """Requested search exceeds the supported desk scale."""


# -- exact linear algebra helpers ------------------------------------------------


def _nullspace(rows: Sequence[Sequence[Fraction]], n: int) -> list[list[Fraction]]:
    """Basis of the exact nullspace of the given row system in n unknowns."""
    matrix = [list(map(Fraction, row)) for row in rows]
    pivot_of_col: dict[int, int] = {}
    rank = 0
    for col in range(n):
        pivot_row = None
        for i in range(rank, len(matrix)):
            if matrix[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        matrix[rank], matrix[pivot_row] = matrix[pivot_row], matrix[rank]
        pivot = matrix[rank][col]
        matrix[rank] = [v / pivot for v in matrix[rank]]
        for i in range(len(matrix)):
            if i != rank and matrix[i][col] != 0:
                factor = matrix[i][col]
                matrix[i] = [a - factor * b
                             for a, b in zip(matrix[i], matrix[rank])]
        pivot_of_col[col] = rank
        rank += 1
    basis = []
    free_cols = [c for c in range(n) if c not in pivot_of_col]
    for free in free_cols:
        vector = [Fraction(0)] * n
        vector[free] = Fraction(1)
        for col, row in pivot_of_col.items():
            vector[col] = -matrix[row][free]
        basis.append(vector)
    return basis


def _primitive(vector: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Scale so the first nonzero entry is positive and entries are integral."""
    lead = next((v for v in vector if v != 0), None)
    if lead is None:
        return tuple(vector)
    scaled = [v / abs(lead) for v in vector]
    denominator = lcm(*(v.denominator for v in scaled))
    ints = [v * denominator for v in scaled]
    divisor = 0
    for v in ints:
        divisor = gcd(divisor, abs(v.numerator))
    return tuple(v / divisor for v in ints)


# -- linear cofactor enumeration ----------------------------------------------------


_CROSS_FUNCTIONALS = (
    (1, 1, 0, 0),    # coefficient of x1*x2
    (-1, 0, 1, 0),   # coefficient of x1*x3
    (0, -1, 1, 0),   # coefficient of x2*x3
    (-1, 0, 0, 1),   # coefficient of x1*x4
    (0, -1, 0, 1),   # coefficient of x2*x4
    (0, 0, 1, 1),    # -(coefficient of x3*x4)
)


def _linear_candidate_passes(a: Sequence[Fraction]) -> bool:
    if all(v == 0 for v in a):
        return False
    q = Polynomial(4, {tuple(1 if j == i else 0 for j in range(4)): a[i]
                       for i in range(4) if a[i]})
    balance = SignatureLinearForm(2, 2).polynomial() * q
    if balance.count_monomials() > 6:
        return False
    return linear_positive_on_region(list(a), [0, 1], [2, 3]) is None


def enumerate_linear_QP(r: int = 2) -> list[Polynomial]:
    """All linear cofactors admissible for degree-2 maps ``D(2,2) -> D(3,3)``.

    Exact case analysis over vanishing patterns; returns representatives up to
    positive scaling, in a deterministic order.
    """
    if r != 2:
        raise ScaleError("the linear cofactor analysis is implemented for r = 2")
    rng = random.Random(1729)
    solutions: set[tuple[Fraction, ...]] = set()
    ids = range(4)
    for zero_vars in itertools.chain.from_iterable(
            itertools.combinations(ids, k) for k in range(4)):
        base_rows = [[Fraction(1 if j == i else 0) for j in ids]
                     for i in zero_vars]
        for pattern_size in range(7):
            for pattern in itertools.combinations(range(6), pattern_size):
                rows = base_rows + [list(map(Fraction, _CROSS_FUNCTIONALS[i]))
                                    for i in pattern]
                basis = _nullspace(rows, 4)
                if not basis:
                    continue
                if len(basis) == 1:
                    candidate = _primitive(basis[0])
                    if _linear_candidate_passes(candidate):
                        solutions.add(candidate)
                    continue
                # Higher-dimensional spaces must not contribute whole families:
                # probe random members; any passing member must expose a finer
                # vanishing pattern whose own solution space is a single line.
                for _ in range(3):
                    weights = [Fraction(rng.randint(-5, 5)) for _ in basis]
                    member = [sum(w * b[i] for w, b in zip(weights, basis))
                              for i in ids]
                    if not _linear_candidate_passes(member):
                        continue
                    fine_rows = [[Fraction(1 if j == i else 0) for j in ids]
                                 for i in ids if member[i] == 0]
                    fine_rows += [list(map(Fraction, functional))
                                  for functional in _CROSS_FUNCTIONALS
                                  if sum(f * m for f, m in
                                         zip(functional, member)) == 0]
                    fine_basis = _nullspace(fine_rows, 4)
                    if len(fine_basis) > 1:
                        raise AssertionError(
                            "unexpected family of admissible linear cofactors")
    ordered = sorted(solutions, reverse=True)
    return [Polynomial(4, {tuple(1 if j == i else 0 for j in ids): a[i]
                           for i in ids if a[i]})
            for a in ordered]


# -- cofactor to map ---------------------------------------------------------------


def qp_to_map(q: Polynomial, m: int, sig: Signature) -> MonomialBallMap:
    """Read a monomial map off the sign split of ``L^m * q``.

    Positive terms become positive slots with coefficient ``sqrt(term)``,
    negative terms become negative slots; raises :class:`InfeasibleError` when
    either side needs more slots than the signature offers.
    """
    if m < 1:
        raise DomainError("m must be a positive integer")
    form = SignatureLinearForm(sig.r, sig.s)
    balance = (form.polynomial() ** m) * q
    if not balance.is_homogeneous():
        raise DomainError("the balance polynomial must be homogeneous")
    positive: list[MapComponent] = []
    negative: list[MapComponent] = []
    for exponents, coeff in balance.terms():
        if not isinstance(coeff, Fraction):
            raise DomainError("cofactors must have rational coefficients")
        if coeff > 0:
            positive.append(MapComponent(Surd.from_square(coeff), exponents))
        else:
            negative.append(MapComponent(Surd.from_square(-coeff), exponents))
    if len(positive) > sig.rp or len(negative) > sig.sp:
        raise InfeasibleError(
            f"{len(positive)} positive / {len(negative)} negative terms do "
            f"not fit in ({sig.rp}, {sig.sp}) slots")
    positive += [None] * (sig.rp - len(positive))
    negative += [None] * (sig.sp - len(negative))
    return MonomialBallMap(sig, positive, negative)


# -- degree-2 classification ----------------------------------------------------------


@dataclass(frozen=True)
class ClassificationReport:
    degree: int
    signature: Signature
    representatives: tuple[MonomialBallMap, ...]
    reduced_representatives: tuple[MonomialBallMap, ...]
    rejected_count: int
    candidate_cofactors: tuple[Polynomial, ...]
    lemma_bounds_used: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "signature": list(self.signature.as_tuple()),
            "representatives": [g.to_json() for g in self.representatives],
            "reduced_to_lower_degree": [g.to_json()
                                        for g in self.reduced_representatives],
            "rejected_count": self.rejected_count,
            "candidate_cofactors": [q.to_text()
                                    for q in self.candidate_cofactors],
            "lemma_bounds_used": list(self.lemma_bounds_used),
        }


def classify_degree2_r2() -> ClassificationReport:
    """Degree-2 classification for ``D(2,2) -> D(3,3)``.

    Runs the linear cofactor enumeration, converts each cofactor to a map, and
    canonicalizes.  Cofactors whose maps drop to degree 1 after removing the
    common monomial factor are reported separately.
    """
    sig = Signature(2, 2, 3, 3)
    candidates = enumerate_linear_QP(2)
    representatives: list[MonomialBallMap] = []
    reduced: list[MonomialBallMap] = []
    rejected = 0
    for q in candidates:
        try:
            g = qp_to_map(q, 1, sig)
        except InfeasibleError:
            rejected += 1
            continue
        certificate = properness_certificate(g)
        if not certificate.is_positive:
            rejected += 1
            continue
        stripped = g.rationally_reduce()
        canonical = stripped.canonical_form()
        bucket = representatives if stripped.degree == 2 else reduced
        if canonical not in bucket:
            bucket.append(canonical)
    return ClassificationReport(
        degree=2,
        signature=sig,
        representatives=tuple(representatives),
        reduced_representatives=tuple(reduced),
        rejected_count=rejected,
        candidate_cofactors=tuple(candidates),
        lemma_bounds_used=(
            "n(P) <= 2r + 2 forces m = 1 and a linear cofactor at r = 2",
            "products with a full-support linear form keep >= 2k-1 monomials "
            "when m >= 2",
        ),
    )


# -- randomized harnesses for the counting bounds ---------------------------------------


LEMMA_IDS = ("3.1", "3.2", "3.3", "3.5")
#: Aliases matching the harness selector tokens.
L3_1, L3_2, L3_3, L3_5 = LEMMA_IDS


def _random_homogeneous(rng: random.Random, arity: int, degree: int,
                        max_terms: int, nonneg: bool,
                        min_terms: int = 1) -> Polynomial:
    wanted = rng.randint(min_terms, max(max_terms, min_terms))
    terms: dict[tuple[int, ...], Fraction] = {}
    guard = 0
    while len(terms) < wanted and guard < 50:
        guard += 1
        cuts = sorted(rng.randint(0, degree) for _ in range(arity - 1))
        exponents = tuple(b - a for a, b in zip([0] + cuts, cuts + [degree]))
        coeff = Fraction(rng.randint(1, 9), rng.randint(1, 4))
        if not nonneg and rng.random() < 0.5:
            coeff = -coeff
        terms[exponents] = coeff
    return Polynomial(arity, terms)


def _random_full_support_linear(rng: random.Random, arity: int,
                                positive: bool = False) -> Polynomial:
    terms = {}
    for i in range(arity):
        exponents = tuple(1 if j == i else 0 for j in range(arity))
        coeff = Fraction(rng.randint(1, 9), rng.randint(1, 4))
        if not positive and rng.random() < 0.5:
            coeff = -coeff
        terms[exponents] = coeff
    return Polynomial(arity, terms)


def lemma_harness(lemma: str, trials: int, seed: int,
                  size_bounds: Optional[dict] = None) -> list[dict]:
    """Randomized check of one monomial-count bound; returns violations.

    ``lemma`` selects the bound:

    * ``"3.1"`` - ``n(B^m * A) >= sum_i n_i(A)`` for nonzero ``A`` and a
      full-support linear ``B``;
    * ``"3.2"`` - with a nonnegative cofactor and ``m >= 2``,
      ``n(P) >= 2k - 1``;
    * ``"3.3"`` - signature form times a nonnegative cofactor with at least
      two terms: ``n(P) >= 3r - 1``, and ``n(P) >= 9`` at ``r = 3``;
    * ``"3.5"`` - linear cofactor: ``n(P) >= 2k - 1`` for ``m >= 2`` and
      ``n(P) >= 2k - 2`` for ``m = 1`` with at least two terms.
    """
    if lemma not in LEMMA_IDS:
        raise DomainError(f"unknown lemma id {lemma!r}; pick from {LEMMA_IDS}")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    bounds = size_bounds or {}
    max_k = bounds.get("max_vars", 5)
    max_degree = bounds.get("max_degree", 4)
    violations: list[dict] = []
    for trial in range(trials):
        rng = random.Random(seed * 1_000_003 + trial)
        if lemma == "3.1":
            k = rng.randint(2, max_k)
            m = rng.randint(1, 3)
            tilde = _random_homogeneous(rng, k, rng.randint(0, max_degree - 1), 4,
                                        nonneg=False)
            linear = _random_full_support_linear(rng, k)
            product = (linear ** m) * tilde
            bound = sum(tilde.count_max_degree_monomials(i) for i in range(k))
            actual = product.count_monomials()
        elif lemma == "3.2":
            k = bounds.get("vars", rng.randint(2, max_k))
            m = rng.randint(2, 3)
            cofactor = _random_homogeneous(rng, k, rng.randint(1, max_degree - 2),
                                           4, nonneg=True)
            linear = _random_full_support_linear(rng, k)
            product = (linear ** m) * cofactor
            bound = 2 * k - 1
            actual = product.count_monomials()
        elif lemma == "3.3":
            r = bounds.get("r", rng.randint(2, 4))
            form = SignatureLinearForm(r, r)
            cofactor = _random_homogeneous(rng, 2 * r,
                                           rng.randint(1, max_degree - 1), 5,
                                           nonneg=True, min_terms=2)
            if cofactor.count_monomials() < 2:
                continue
            product = form.polynomial() * cofactor
            bound = 9 if r == 3 else 3 * r - 1
            actual = product.count_monomials()
        else:  # "3.5"
            k = rng.randint(2, max_k)
            m = rng.choice([1, 2, 3])
            min_terms = 2 if m == 1 else 1
            cofactor = _random_full_support_linear(rng, k) \
                if rng.random() < 0.5 else None
            if cofactor is None:
                cofactor = _random_homogeneous(rng, k, 1, k, nonneg=False,
                                               min_terms=min_terms)
            if m == 1 and cofactor.count_monomials() < 2:
                continue
            linear = _random_full_support_linear(rng, k)
            product = (linear ** m) * cofactor
            bound = 2 * k - 1 if m >= 2 else 2 * k - 2
            actual = product.count_monomials()
        if actual < bound:
            violations.append({"lemma": lemma, "trial": trial, "n_P": actual,
                               "bound": bound})
    return violations


# -- brute force oracle ------------------------------------------------------------------


@dataclass(frozen=True)
class SearchRecord:
    """One accepted candidate with its certificate provenance."""

    map: MonomialBallMap
    m: int
    q_p: Polynomial
    positivity: object

    def to_json(self) -> dict:
        if isinstance(self.positivity, NonnegCoeffs):
            verdict = "NonnegCoeffs"
        elif isinstance(self.positivity, ExactLinear):
            verdict = "ExactLinear"
        elif isinstance(self.positivity, SampledPositive):
            verdict = "SampledPositive"
        else:  # pragma: no cover - rejected candidates never reach records
            verdict = "FailedAt"
        return {"map": self.map.to_json(), "m": self.m,
                "q_p": self.q_p.to_text(), "positivity": verdict}


def _monomials_of_degree(arity: int, degree: int) -> list[tuple[int, ...]]:
    result = []
    for cuts in itertools.combinations_with_replacement(range(arity), degree):
        exponents = [0] * arity
        for c in cuts:
            exponents[c] += 1
        result.append(tuple(exponents))
    return sorted(set(result), reverse=True)


def _hyperplane_points(r: int, s: int, count: int = 6) -> list[list[Fraction]]:
    rng = random.Random(4241)
    points = []
    while len(points) < count:
        first = [Fraction(rng.randint(1, 40)) for _ in range(r)]
        last = [Fraction(rng.randint(1, 40)) for _ in range(s - 1)]
        closing = sum(first) - sum(last)
        if closing <= 0:
            continue
        points.append(first + last + [closing])
    return points


def brute_force_search(sig: Signature, degree: int,
                       coeffsq_grid: Sequence[Fraction]) -> list[SearchRecord]:
    """Enumerate every slot assignment and keep the certified-proper maps.

    Coefficient squares are drawn from ``coeffsq_grid``; the result is the
    deduplicated list of canonical forms of the rationally reduced survivors,
    with certificate provenance.  Slot order never matters, so multisets of
    (monomial, coefficient-square) pairs are enumerated instead of tuples.
    """
    if sig.source_arity > 4 or degree > 3 or len(coeffsq_grid) > 8:
        raise ScaleError("search supports r+s <= 4, degree <= 3, grid <= 8")
    grid = [Fraction(c) for c in coeffsq_grid]
    if any(c <= 0 for c in grid):
        raise ScaleError("coefficient squares must be positive")
    monomials = _monomials_of_degree(sig.source_arity, degree)
    options = [(exponents, csq) for exponents in monomials for csq in grid]
    points = _hyperplane_points(sig.r, sig.s)

    value_of = {
        (exponents, csq): tuple(
            csq * _monomial_value(exponents, point) for point in points)
        for exponents, csq in options
    }

    def multiset_vectors(max_size: int, include_empty: bool):
        table: dict[tuple[Fraction, ...], list[tuple]] = {}
        sizes = range(0 if include_empty else 1, max_size + 1)
        for size in sizes:
            for combo in itertools.combinations_with_replacement(options, size):
                total = tuple(
                    sum(value_of[option][i] for option in combo)
                    for i in range(len(points)))
                table.setdefault(total, []).append(combo)
        return table

    positive_table = multiset_vectors(sig.rp, include_empty=False)
    negative_table = multiset_vectors(sig.sp, include_empty=True)

    records: dict[MonomialBallMap, SearchRecord] = {}
    for vector, positive_combos in positive_table.items():
        negative_combos = negative_table.get(vector)
        if not negative_combos:
            continue
        for pos in positive_combos:
            for neg in negative_combos:
                candidate = _assemble(sig, pos, neg)
                if candidate is None:
                    continue
                try:
                    certificate = properness_certificate(candidate)
                except NotProperError:
                    continue
                if not certificate.is_positive:
                    continue
                canonical = candidate.rationally_reduce().canonical_form()
                if canonical not in records:
                    records[canonical] = SearchRecord(
                        canonical, certificate.m, certificate.q_p,
                        certificate.positivity)
    ordered = sorted(records.values(),
                     key=lambda rec: (rec.map.degree, str(rec.map)))
    return ordered


def _monomial_value(exponents: tuple[int, ...],
                    point: Sequence[Fraction]) -> Fraction:
    value = Fraction(1)
    for v, e in zip(point, exponents):
        if e:
            value *= v ** e
    return value


def _assemble(sig: Signature, pos, neg) -> Optional[MonomialBallMap]:
    positive = [MapComponent(Surd.from_square(csq), exponents)
                for exponents, csq in pos]
    negative = [MapComponent(Surd.from_square(csq), exponents)
                for exponents, csq in neg]
    balance_check = sum(1 for _ in positive)
    if balance_check == 0:
        return None
    positive += [None] * (sig.rp - len(positive))
    negative += [None] * (sig.sp - len(negative))
    g = MonomialBallMap(sig, positive, negative)
    if g.squared_norm_polynomial().is_zero:
        return None
    return g
