"""Construction of matrix-domain maps from monomial ball maps.

Given a monomial map ``g = [g1 | g2]`` between generalized balls, the induced
map ``f`` between type-I matrix domains must satisfy

    g1([X, XZ]) . f(Z) = g2([X, XZ])    for every parameter row ``[X]``,

where ``[X, XZ]`` runs over the projective fiber attached to the matrix ``Z``.
Expanding in the ``X`` monomials turns this into one exact linear system with
polynomial entries in the ``z`` variables, shared by every column of ``f``.
The solver runs fraction-free (Bareiss) elimination over the surd-sum
coefficient field, keeps every division exact, and reports solution entries
only when they are genuinely polynomials.

Variable convention: a matrix ``Z`` of shape r x s is flattened row-major into
``z1 ... z_{rs}``; combined polynomials use ``x1 ... xr`` first, then the
``z`` block.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import random
from typing import Optional, Sequence

from .ballmap import MonomialBallMap, Signature
from .exactnum import DomainError, SurdSum
from .poly import (
    ArityError,
    NotDivisibleError,
    Polynomial,
    exact_div,
    parse_polynomial,
)


class DegenerateFiberError(ValueError):
    """The fiber constraint has a vanishing parameter row."""


class NonPolynomialSolutionError(ArithmeticError):
    """Back substitution required a division with a remainder."""


class SolveStatus(Enum):
    UNIQUE = "Unique"
    UNDERDETERMINED = "Underdetermined"
    INCONSISTENT = "Inconsistent"


# -- fibers --------------------------------------------------------------------


@dataclass(frozen=True)
class BallPoint:
    """A projective point ``[a | b]`` split into its two blocks."""

    a: tuple
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        object.__setattr__(self, "b", tuple(self.b))
        if not self.a or all(abs(complex(v)) == 0 for v in self.a + self.b):
            raise DomainError("ball points cannot be identically zero")

    @property
    def coordinates(self) -> tuple:
        return self.a + self.b

    def margin(self) -> float:
        """Scale-invariant membership margin: positive inside the ball."""
        top = sum(abs(complex(v)) ** 2 for v in self.a)
        bottom = sum(abs(complex(v)) ** 2 for v in self.b)
        return (top - bottom) / (top + bottom)


@dataclass(frozen=True)
class FiberConstraint:
    """The affine slice ``{Z : a Z = b}`` attached to a ball point."""

    a: tuple
    b: tuple

    @property
    def r(self) -> int:
        return len(self.a)

    @property
    def s(self) -> int:
        return len(self.b)


def ball_fiber(x: BallPoint) -> FiberConstraint:
    """Linear constraint data of the fiber over a ball point."""
    if all(abs(complex(v)) == 0 for v in x.a):
        raise DegenerateFiberError("fiber needs a nonzero first block")
    return FiberConstraint(x.a, x.b)


def domain_fiber(r: int, s: int) -> list[Polynomial]:
    """Symbolic fiber ``[x1, ..., xr, (XZ)_1, ..., (XZ)_s]``.

    Entries are polynomials in ``r + r*s`` variables: the parameter row first,
    then the matrix entries row-major.
    """
    arity = r + r * s
    components = [Polynomial.variable(arity, i) for i in range(r)]
    for j in range(s):
        acc = Polynomial.zero(arity)
        for i in range(r):
            exponents = [0] * arity
            exponents[i] = 1
            exponents[r + i * s + j] = 1
            acc = acc + Polynomial.monomial(arity, exponents, 1)
        components.append(acc)
    return components


# -- symbolic matrices -----------------------------------------------------------


class SymbolicMatrixMap:
    """A matrix of polynomials in the flattened source variables ``z1..z_{rs}``."""

    __slots__ = ("rp", "sp", "entries")

    def __init__(self, rp: int, sp: int,
                 entries: Sequence[Sequence[Polynomial]]):
        entries = tuple(tuple(row) for row in entries)
        if len(entries) != rp or any(len(row) != sp for row in entries):
            raise ArityError("entry grid must be rp x sp")
        arities = {e.arity for row in entries for e in row}
        if len(arities) > 1:
            raise ArityError("all entries must share one arity")
        object.__setattr__(self, "rp", rp)
        object.__setattr__(self, "sp", sp)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("SymbolicMatrixMap is immutable")

    @property
    def arity(self) -> int:
        return self.entries[0][0].arity

    def entry(self, row: int, col: int) -> Polynomial:
        return self.entries[row][col]

    def with_entry(self, row: int, col: int,
                   value: Polynomial) -> "SymbolicMatrixMap":
        grid = [list(r) for r in self.entries]
        grid[row][col] = value
        return SymbolicMatrixMap(self.rp, self.sp, grid)

    def evaluate(self, z_values: Sequence[complex]) -> list[list[complex]]:
        return [[entry.evaluate(z_values) for entry in row]
                for row in self.entries]

    def to_json(self) -> dict:
        return {"rp": self.rp, "sp": self.sp,
                "entries": [[entry.to_text(prefix="z") for entry in row]
                            for row in self.entries]}

    @classmethod
    def from_json(cls, data: dict, arity: Optional[int] = None) -> "SymbolicMatrixMap":
        rows = data["entries"]
        if arity is None:
            arity = data.get("arity")
        if arity is None:
            raise ArityError("entry arity (r*s) must be supplied")
        entries = [[parse_polynomial(text, arity, prefix="z") for text in row]
                   for row in rows]
        return cls(data["rp"], data["sp"], entries)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SymbolicMatrixMap)
                and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash(self.entries)

    def __str__(self) -> str:
        rows = ["[" + ", ".join(e.to_text(prefix="z") for e in row) + "]"
                for row in self.entries]
        return "[" + ",\n ".join(rows) + "]"

    def __repr__(self) -> str:
        return f"SymbolicMatrixMap({self.rp}x{self.sp})"


def zero_matrix_map(rp: int, sp: int, arity: int) -> SymbolicMatrixMap:
    zero = Polynomial.zero(arity)
    return SymbolicMatrixMap(rp, sp, [[zero] * sp for _ in range(rp)])


# -- the linear system ---------------------------------------------------------------


def _component_on_fiber(slot, fiber: Sequence[Polynomial],
                        arity: int) -> Polynomial:
    acc = Polynomial.constant(arity, slot.coeff)
    for component, exponent in zip(fiber, slot.exponents):
        if exponent:
            acc = acc * component ** exponent
    return acc


def _collect_x(poly: Polynomial, r: int, z_arity: int) -> dict[tuple[int, ...],
                                                               Polynomial]:
    """Group a combined-arity polynomial by its x-monomial part."""
    grouped: dict[tuple[int, ...], dict[tuple[int, ...], object]] = {}
    for exponents, coeff in poly.terms():
        x_part = exponents[:r]
        z_part = exponents[r:]
        grouped.setdefault(x_part, {})[z_part] = coeff
    return {x_part: Polynomial(z_arity, terms)
            for x_part, terms in grouped.items()}


@dataclass(frozen=True)
class InducedSystem:
    """Exact linear system determining the induced map.

    ``matrix[i][k]`` is the z-polynomial coefficient of x-monomial ``i`` in
    ``g1_k`` on the fiber; ``rhs[j][i]`` is the matching coefficient of
    ``g2_j``.  A map column ``col_j`` solves the construction identity iff
    ``matrix . col_j = rhs[j]`` entry-wise.
    """

    signature: Signature
    x_monomials: tuple[tuple[int, ...], ...]
    matrix: tuple[tuple[Polynomial, ...], ...]
    rhs: tuple[tuple[Polynomial, ...], ...]

    @property
    def z_arity(self) -> int:
        return self.signature.r * self.signature.s


def build_system(g: MonomialBallMap) -> InducedSystem:
    """Expand the construction identity and collect x-monomial coefficients."""
    sig = g.signature
    r, s = sig.r, sig.s
    arity = r + r * s
    z_arity = r * s
    fiber = domain_fiber(r, s)
    zero = Polynomial.zero(z_arity)

    positive_collected = []
    for slot in g.positive:
        if slot is None:
            positive_collected.append({})
        else:
            positive_collected.append(_collect_x(
                _component_on_fiber(slot, fiber, arity), r, z_arity))
    negative_collected = []
    for slot in g.negative:
        if slot is None:
            negative_collected.append({})
        else:
            negative_collected.append(_collect_x(
                _component_on_fiber(slot, fiber, arity), r, z_arity))

    monomials = sorted({x for collected in positive_collected + negative_collected
                        for x in collected}, reverse=True)
    matrix = tuple(
        tuple(collected.get(x, zero) for collected in positive_collected)
        for x in monomials)
    rhs = tuple(
        tuple(collected.get(x, zero) for x in monomials)
        for collected in negative_collected)
    return InducedSystem(sig, tuple(monomials), matrix, rhs)


# -- the exact solver -------------------------------------------------------------------


@dataclass(frozen=True)
class SolveOutcome:
    status: SolveStatus
    particular: Optional[SymbolicMatrixMap]
    free_entries: tuple[tuple[int, int], ...]
    free_columns_zero: bool
    system: InducedSystem

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "f": None if self.particular is None else self.particular.to_json(),
            "free_entries": [list(pair) for pair in self.free_entries],
            "free_columns_zero": self.free_columns_zero,
        }


def _pivot_key(poly: Polynomial) -> tuple:
    exponents, _ = poly.leading_term()
    return (poly.total_degree(), tuple(-e for e in exponents))


def solve_induced(g: MonomialBallMap,
                  free_values: Optional[dict[tuple[int, int], Polynomial]] = None
                  ) -> SolveOutcome:
    """Solve the construction system exactly over polynomials.

    Fraction-free elimination with pivots chosen by minimal polynomial degree
    (then lex order of the leading monomial); every division is exact and a
    remainder raises :class:`NonPolynomialSolutionError`.  Unconstrained
    unknowns are reported as free entries; the particular solution sets them
    to zero unless ``free_values`` pins them.
    """
    system = build_system(g)
    return solve_system(system, free_values)


def solve_system(system: InducedSystem,
                 free_values: Optional[dict[tuple[int, int], Polynomial]] = None
                 ) -> SolveOutcome:
    sig = system.signature
    n_unknowns = sig.rp
    n_rhs = sig.sp
    z_arity = system.z_arity
    zero = Polynomial.zero(z_arity)
    one = Polynomial.constant(z_arity, 1)
    free_values = free_values or {}

    rows = [
        {"lhs": list(row), "rhs": [system.rhs[j][i] for j in range(n_rhs)]}
        for i, row in enumerate(system.matrix)
    ]

    pivot_rows: list[tuple[int, dict]] = []  # (column, row) in pivot order
    remaining = list(range(len(rows)))
    free_cols: list[int] = []
    previous_pivot = one
    for col in range(n_unknowns):
        candidates = [i for i in remaining if not rows[i]["lhs"][col].is_zero]
        if not candidates:
            free_cols.append(col)
            continue
        best = min(candidates, key=lambda i: _pivot_key(rows[i]["lhs"][col]))
        remaining.remove(best)
        pivot = rows[best]["lhs"][col]
        for i in remaining:
            row = rows[i]
            factor = row["lhs"][col]
            for c in range(n_unknowns):
                updated = pivot * row["lhs"][c] - factor * rows[best]["lhs"][c]
                row["lhs"][c] = exact_div(updated, previous_pivot) \
                    if not previous_pivot == one else updated
            for j in range(n_rhs):
                updated = pivot * row["rhs"][j] - factor * rows[best]["rhs"][j]
                row["rhs"][j] = exact_div(updated, previous_pivot) \
                    if not previous_pivot == one else updated
        previous_pivot = pivot
        pivot_rows.append((col, rows[best]))

    for i in remaining:
        if any(not entry.is_zero for entry in rows[i]["lhs"]):  # pragma: no cover
            raise AssertionError("elimination left an unreduced row")
        if any(not entry.is_zero for entry in rows[i]["rhs"]):
            return SolveOutcome(SolveStatus.INCONSISTENT, None, tuple(),
                                False, system)

    solution = [[zero for _ in range(n_rhs)] for _ in range(n_unknowns)]
    for col in free_cols:
        for j in range(n_rhs):
            solution[col][j] = free_values.get((col, j), zero)
    try:
        for col, row in reversed(pivot_rows):
            pivot = row["lhs"][col]
            for j in range(n_rhs):
                acc = row["rhs"][j]
                for c in range(n_unknowns):
                    if c != col and not row["lhs"][c].is_zero:
                        acc = acc - row["lhs"][c] * solution[c][j]
                solution[col][j] = exact_div(acc, pivot)
    except NotDivisibleError as exc:
        raise NonPolynomialSolutionError(
            f"solution entry is not a polynomial: {exc}") from exc

    particular = SymbolicMatrixMap(n_unknowns, n_rhs, solution)
    if not free_cols:
        return SolveOutcome(SolveStatus.UNIQUE, particular, tuple(), True,
                            system)
    free_entries = tuple((col, j) for col in free_cols for j in range(n_rhs))
    zero_columns = all(
        system.matrix[i][col].is_zero
        for col in free_cols for i in range(len(system.matrix)))
    return SolveOutcome(SolveStatus.UNDERDETERMINED, particular, free_entries,
                        zero_columns, system)


# -- residual and independence ------------------------------------------------------------


def residual_check(g: MonomialBallMap, f: SymbolicMatrixMap) -> list[Polynomial]:
    """Expanded residual ``g1(fiber) . f - g2(fiber)`` per target column.

    All-zero output means ``f`` satisfies the construction identity exactly,
    as a polynomial identity in the parameter and matrix variables jointly.
    """
    sig = g.signature
    if f.rp != sig.rp or f.sp != sig.sp:
        raise ArityError("matrix shape must match the target signature")
    r, s = sig.r, sig.s
    arity = r + r * s
    fiber = domain_fiber(r, s)
    g1 = [Polynomial.zero(arity) if slot is None
          else _component_on_fiber(slot, fiber, arity) for slot in g.positive]
    g2 = [Polynomial.zero(arity) if slot is None
          else _component_on_fiber(slot, fiber, arity) for slot in g.negative]
    residuals = []
    for j in range(sig.sp):
        acc = Polynomial.zero(arity)
        for k in range(sig.rp):
            if g1[k].is_zero:
                continue
            entry = f.entry(k, j)
            if entry.is_zero:
                continue
            acc = acc + g1[k] * entry.embed(arity, r)
        residuals.append(acc - g2[j])
    return residuals


class IndependenceStatus(Enum):
    INDEPENDENT = "Independent"
    DEPENDENT_EVERYWHERE = "DependentEverywhere"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class IndependenceReport:
    status: IndependenceStatus
    rank: int
    witness: Optional[dict] = None


def _fraction_rank(matrix: list[list[Fraction]]) -> int:
    work = [row[:] for row in matrix]
    rank = 0
    n_cols = len(work[0]) if work else 0
    for col in range(n_cols):
        pivot_row = None
        for i in range(rank, len(work)):
            if work[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        work[rank], work[pivot_row] = work[pivot_row], work[rank]
        pivot = work[rank][col]
        for i in range(rank + 1, len(work)):
            if work[i][col] != 0:
                factor = work[i][col] / pivot
                work[i] = [a - factor * b for a, b in zip(work[i], work[rank])]
        rank += 1
    return rank


def independence_check(g: MonomialBallMap, trials: int = 20,
                       seed: int = 7) -> IndependenceReport:
    """Exact generic-rank test of the fibered positive components.

    Evaluates the positive block at ``r'`` rational parameter rows over random
    rational matrices and computes the exact rank.  One full-rank witness
    certifies independence for generic matrices (the full-rank locus is
    Zariski open); if every trial stays rank deficient the common maximal rank
    is reported.
    """
    sig = g.signature
    r, s, rp = sig.r, sig.s, sig.rp
    best_rank = 0
    witness = None
    for trial in range(max(1, trials)):
        rng = random.Random(seed * 1_000_003 + trial)
        z = [[Fraction(rng.randint(-9, 9), rng.randint(1, 3))
              for _ in range(s)] for _ in range(r)]
        for _ in range(3):
            xs = [[Fraction(rng.randint(-5, 5)) for _ in range(r)]
                  for _ in range(rp)]
            if any(all(v == 0 for v in x) for x in xs):
                continue
            matrix = []
            for x in xs:
                fiber_values = list(x) + [
                    sum(x[i] * z[i][j] for i in range(r)) for j in range(s)]
                row = []
                for slot in g.positive:
                    if slot is None:
                        row.append(Fraction(0))
                        continue
                    value = Fraction(1)
                    for v, e in zip(fiber_values, slot.exponents):
                        if e:
                            value *= v ** e
                    row.append(value)  # surd coefficients scale columns only
                matrix.append(row)
            rank = _fraction_rank(matrix)
            if rank > best_rank:
                best_rank = rank
                witness = {"z": [[str(v) for v in row] for row in z],
                           "x_rows": [[str(v) for v in x] for x in xs]}
            if rank == rp:
                return IndependenceReport(IndependenceStatus.INDEPENDENT, rank,
                                          witness)
    if best_rank == 0:
        return IndependenceReport(IndependenceStatus.UNKNOWN, 0, None)
    return IndependenceReport(IndependenceStatus.DEPENDENT_EVERYWHERE,
                              best_rank, witness)
