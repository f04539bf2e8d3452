"""Named exact encodings of the worked map pairs (g, f).

Each entry carries the monomial ball map, the expected induced matrix map,
and notes.  Where a printed source form disagrees with what the construction
identity forces, the recomputed data is authoritative and the printed form is
kept verbatim in the entry notes; :func:`verify_entry` re-derives everything
and reports the discrepancies as typo flags.

Parametric families take a rational parameter ``t``; coefficients are
normalized surds over radicands built from ``t``, ``1-t`` and ``2-t``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .ballmap import MapComponent, MonomialBallMap, Signature, properness_certificate
from .exactnum import DomainError, Surd, SurdSum, surd_normalize
from .induce import (
    SolveOutcome,
    SolveStatus,
    SymbolicMatrixMap,
    residual_check,
    solve_induced,
)
from .poly import Polynomial, SignatureLinearForm, parse_polynomial


class NotFoundError(KeyError):
    """No catalog entry with that name."""


class ParamError(ValueError):
    """Parameter outside the admissible range of a parametric entry."""

    def __init__(self, message: str, reason: str = "OutOfRange"):
        super().__init__(message)
        self.reason = reason


@dataclass(frozen=True)
class BuiltEntry:
    g: MonomialBallMap
    f_expected: SymbolicMatrixMap
    expected_free_entries: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    signature: Signature
    t_range: Optional[tuple[Fraction, Fraction, bool]]  # (lo, hi, hi inclusive)
    notes: tuple[str, ...]
    builder: Callable[[Optional[Fraction]], BuiltEntry]
    printed: dict = field(default_factory=dict)

    @property
    def is_parametric(self) -> bool:
        return self.t_range is not None

    def build(self, t: Optional[Fraction] = None) -> BuiltEntry:
        if self.is_parametric:
            t = Fraction(0) if t is None else Fraction(t)
            lo, hi, hi_inclusive = self.t_range
            if t < lo or t > hi or (t == hi and not hi_inclusive):
                reason = "IndeterminateEntry" if t == hi else "OutOfRange"
                raise ParamError(
                    f"{self.name} admits t in [{lo}, {hi}"
                    + ("]" if hi_inclusive else ")") + f", got {t}", reason)
            return self.builder(t)
        if t is not None:
            raise ParamError(f"{self.name} takes no parameter")
        return self.builder(None)

    @property
    def f_expected(self) -> SymbolicMatrixMap:
        return self.build(Fraction(0) if self.is_parametric else None).f_expected

    def family_at(self, t: Fraction) -> tuple[MonomialBallMap, SymbolicMatrixMap]:
        """Exact (g_t, f_t) for a rational parameter."""
        if not self.is_parametric:
            raise ParamError(f"{self.name} is not parametric")
        built = self.build(t)
        return built.g, built.f_expected


def family_at(entry: CatalogEntry,
              t: Fraction) -> tuple[MonomialBallMap, SymbolicMatrixMap]:
    return entry.family_at(t)


# -- small builders ----------------------------------------------------------------


def _exp(arity: int, *powers: tuple[int, int]) -> tuple[int, ...]:
    exponents = [0] * arity
    for index, power in powers:
        exponents[index] += power
    return tuple(exponents)


def _slot(arity, coeff, *powers) -> Optional[MapComponent]:
    if isinstance(coeff, Surd):
        if coeff.is_zero:
            return None
        surd = coeff
    else:
        coeff = Fraction(coeff)
        if coeff == 0:
            return None
        surd = Surd(coeff)
    return MapComponent(surd, _exp(arity, *powers))


def _zpoly(z_arity: int, terms: dict) -> Polynomial:
    return Polynomial(z_arity, terms)


def _zmono(z_arity: int, coeff, *powers) -> Polynomial:
    if isinstance(coeff, (Surd, SurdSum)):
        if (coeff.is_zero if isinstance(coeff, SurdSum) else coeff.is_zero):
            return Polynomial.zero(z_arity)
    elif coeff == 0:
        return Polynomial.zero(z_arity)
    return Polynomial(z_arity, {_exp(z_arity, *powers): coeff})


# -- standard degree-1 entry -----------------------------------------------------------


def _build_standard(_t=None) -> BuiltEntry:
    sig = Signature(2, 2, 3, 3)
    arity = 4
    g = MonomialBallMap(
        sig,
        [_slot(arity, 1, (0, 1)), _slot(arity, 1, (1, 1)), None],
        [_slot(arity, 1, (2, 1)), _slot(arity, 1, (3, 1)), None])
    z = 4
    f = SymbolicMatrixMap(3, 3, [
        [_zmono(z, 1, (0, 1)), _zmono(z, 1, (1, 1)), Polynomial.zero(z)],
        [_zmono(z, 1, (2, 1)), _zmono(z, 1, (3, 1)), Polynomial.zero(z)],
        [Polynomial.zero(z)] * 3,
    ])
    free = tuple((2, j) for j in range(3))
    return BuiltEntry(g, f, free)


# -- generalized Whitney family ----------------------------------------------------------


def _build_generalized_whitney(r: int, s: int) -> BuiltEntry:
    if r < 2 or s < 2 or r > 5 or s > 5:
        raise ParamError("generalized_whitney supports 2 <= r, s <= 5")
    n = r + s
    sig = Signature(r, s, 2 * r - 1, 2 * s - 1)
    positive = [_slot(n, 1, (0, 2))]
    positive += [_slot(n, 1, (0, 1), (j, 1)) for j in range(1, r)]
    positive += [_slot(n, 1, (r, 1), (j, 1)) for j in range(1, r)]
    negative = [_slot(n, 1, (r, 2))]
    negative += [_slot(n, 1, (r, 1), (r + j, 1)) for j in range(1, s)]
    negative += [_slot(n, 1, (0, 1), (r + j, 1)) for j in range(1, s)]
    g = MonomialBallMap(sig, positive, negative)

    z = r * s

    def idx(i: int, j: int) -> int:
        return i * s + j

    rows = []
    for i in range(r):
        row = [_zmono(z, 1, (idx(i, 0), 1), (idx(0, col), 1))
               for col in range(s)]
        row += [_zmono(z, 1, (idx(i, j), 1)) for j in range(1, s)]
        rows.append(row)
    for i in range(1, r):
        row = [_zmono(z, 1, (idx(i, col), 1)) for col in range(s)]
        row += [Polynomial.zero(z)] * (s - 1)
        rows.append(row)
    f = SymbolicMatrixMap(2 * r - 1, 2 * s - 1, rows)
    return BuiltEntry(g, f, tuple())


# -- symmetric square family ---------------------------------------------------------------


def _build_symmetric_square(r: int, s: int) -> BuiltEntry:
    if r < 2 or s < 2 or r > 4 or s > 4:
        raise ParamError("symmetric_square supports 2 <= r, s <= 4")
    n = r + s
    rp = r * (r + 1) // 2
    sp = s * (s + 1) // 2
    sig = Signature(r, s, rp, sp)
    root2 = Surd(1, 2)
    positive = [_slot(n, 1, (i, 2)) for i in range(r)]
    positive += [_slot(n, root2, (i, 1), (j, 1))
                 for i, j in itertools.combinations(range(r), 2)]
    negative = [_slot(n, 1, (r + k, 2)) for k in range(s)]
    negative += [_slot(n, root2, (r + k, 1), (r + l, 1))
                 for k, l in itertools.combinations(range(s), 2)]
    g = MonomialBallMap(sig, positive, negative)

    z = r * s

    def idx(i: int, j: int) -> int:
        return i * s + j

    row_labels = [(i,) for i in range(r)] + \
        list(itertools.combinations(range(r), 2))
    col_labels = [(k,) for k in range(s)] + \
        list(itertools.combinations(range(s), 2))
    rows = []
    for label in row_labels:
        row = []
        for col in col_labels:
            if len(label) == 1 and len(col) == 1:
                row.append(_zmono(z, 1, (idx(label[0], col[0]), 2)))
            elif len(label) == 1:
                k, l = col
                row.append(_zmono(z, root2, (idx(label[0], k), 1),
                                  (idx(label[0], l), 1)))
            elif len(col) == 1:
                i, j = label
                row.append(_zmono(z, root2, (idx(i, col[0]), 1),
                                  (idx(j, col[0]), 1)))
            else:
                i, j = label
                k, l = col
                row.append(
                    _zmono(z, 1, (idx(i, k), 1), (idx(j, l), 1))
                    + _zmono(z, 1, (idx(j, k), 1), (idx(i, l), 1)))
        rows.append(row)
    f = SymbolicMatrixMap(rp, sp, rows)
    return BuiltEntry(g, f, tuple())


# -- homotopy family D(2,2) -> D(4,4) ----------------------------------------------------------


def _build_family_2244(t: Fraction) -> BuiltEntry:
    sig = Signature(2, 2, 4, 4)
    n = 4
    sq2mt = surd_normalize(1, 2 - t)
    sq1mt = surd_normalize(1, 1 - t) if t != 1 else Surd(0)
    sqt = surd_normalize(1, t) if t != 0 else Surd(0)
    g = MonomialBallMap(sig, [
        _slot(n, 1, (0, 2)),
        _slot(n, sq2mt, (0, 1), (1, 1)),
        _slot(n, sq1mt, (1, 2)),
        _slot(n, sqt, (1, 1), (2, 1)),
    ], [
        _slot(n, 1, (2, 2)),
        _slot(n, sq2mt, (2, 1), (3, 1)),
        _slot(n, sq1mt, (3, 2)),
        _slot(n, sqt, (0, 1), (3, 1)),
    ])

    z = 4
    one = SurdSum.one()
    inv_sq2mt = sq2mt.to_surdsum().inverse()
    mixing = one - t * inv_sq2mt  # (sqrt(2-t) - t) / sqrt(2-t)
    shear = (sq2mt.to_surdsum() - t) * sq1mt.to_surdsum().inverse() \
        if t != 1 else SurdSum.zero()
    f = SymbolicMatrixMap(4, 4, [
        [_zmono(z, 1, (0, 2)), _zmono(z, sq2mt, (0, 1), (1, 1)),
         _zmono(z, sq1mt, (1, 2)), _zmono(z, sqt, (1, 1))],
        [_zmono(z, sq2mt, (0, 1), (2, 1)),
         _zmono(z, mixing, (0, 1), (3, 1)) + _zmono(z, 1, (1, 1), (2, 1)),
         _zmono(z, 2 * sq1mt.to_surdsum() * inv_sq2mt, (1, 1), (3, 1)),
         _zmono(z, sqt.to_surdsum() * inv_sq2mt, (3, 1))],
        [_zmono(z, sq1mt, (2, 2)), _zmono(z, shear, (2, 1), (3, 1)),
         _zmono(z, 1, (3, 2)), Polynomial.zero(z)],
        [_zmono(z, sqt, (2, 1)), _zmono(z, sqt, (3, 1)),
         Polynomial.zero(z), Polynomial.zero(z)],
    ])
    free = tuple((3, j) for j in range(4))
    return BuiltEntry(g, f, free)


# -- one-sided family D(2,2) -> D(3,4) ------------------------------------------------------------


def _build_family_2234(t: Fraction) -> BuiltEntry:
    sig = Signature(2, 2, 3, 4)
    n = 4
    sqt = surd_normalize(1, t) if t != 0 else Surd(0)
    sq1mt = surd_normalize(1, 1 - t) if t != 1 else Surd(0)
    g = MonomialBallMap(sig, [
        _slot(n, 1, (0, 2)),
        _slot(n, 1, (0, 1), (1, 1)),
        _slot(n, sqt, (1, 1), (2, 1)),
    ], [
        _slot(n, sqt, (2, 2)),
        _slot(n, sqt, (2, 1), (3, 1)),
        _slot(n, sq1mt, (0, 1), (2, 1)),
        _slot(n, 1, (0, 1), (3, 1)),
    ])
    z = 4
    f = SymbolicMatrixMap(3, 4, [
        [_zmono(z, sqt, (0, 2)), _zmono(z, sqt, (0, 1), (1, 1)),
         _zmono(z, sq1mt, (0, 1)), _zmono(z, 1, (1, 1))],
        [_zmono(z, sqt, (0, 1), (2, 1)), _zmono(z, sqt, (1, 1), (2, 1)),
         _zmono(z, sq1mt, (2, 1)), _zmono(z, 1, (3, 1))],
        [_zmono(z, 1, (2, 1)), _zmono(z, 1, (3, 1)),
         Polynomial.zero(z), Polynomial.zero(z)],
    ])
    free = tuple((2, j) for j in range(4)) if t == 0 else tuple()
    return BuiltEntry(g, f, free)


# -- cubic example D(2,2) -> D(4,4) ------------------------------------------------------------------


def _build_degree3(_t=None) -> BuiltEntry:
    sig = Signature(2, 2, 4, 4)
    n = 4
    g = MonomialBallMap(sig, [
        _slot(n, 1, (0, 3)),
        _slot(n, 1, (0, 2), (1, 1)),
        _slot(n, 1, (0, 1), (1, 1), (2, 1)),
        _slot(n, 1, (1, 1), (2, 2)),
    ], [
        _slot(n, 1, (2, 3)),
        _slot(n, 1, (0, 2), (3, 1)),
        _slot(n, 1, (0, 1), (2, 1), (3, 1)),
        _slot(n, 1, (2, 2), (3, 1)),
    ])
    z = 4
    f = SymbolicMatrixMap(4, 4, [
        [_zmono(z, 1, (0, 3)), _zmono(z, 1, (1, 1)),
         _zmono(z, 1, (0, 1), (1, 1)), _zmono(z, 1, (0, 2), (1, 1))],
        [_zmono(z, 1, (0, 2), (2, 1)), _zmono(z, 1, (3, 1)),
         _zmono(z, 1, (1, 1), (2, 1)), _zmono(z, 1, (0, 1), (1, 1), (2, 1))],
        [_zmono(z, 1, (0, 1), (2, 1)), Polynomial.zero(z),
         _zmono(z, 1, (3, 1)), _zmono(z, 1, (1, 1), (2, 1))],
        [_zmono(z, 1, (2, 1)), Polynomial.zero(z),
         Polynomial.zero(z), _zmono(z, 1, (3, 1))],
    ])
    return BuiltEntry(g, f, tuple())


_DEGREE3_PRINTED = {
    "g_monomials": ["x1^3", "x1^2*x2", "x1*x2*x3", "x2*x3^3",
                    "x3^2", "x1^2*x4", "x1*x3*x4", "x3^2*x4"],
    "q_p": "x1^2 + x1*x3 + x3^2",
    "f_entries": [
        ["z1^3", "z2", "z1*z2", "z1^2*z2"],
        ["z1^2*z3^2", "z4", "z2*z3", "z1*z2*z3 - z1^2*z4 + z1^2*z3*z4"],
        ["3*z1*z3 - 2*z1*z3^2", "0", "0", "z2*z3 + 2*z1*z4 - 2*z1*z3*z4"],
        ["z3^2", "0", "0", "z3*z4"],
    ],
}


# -- registry --------------------------------------------------------------------------------------


def _simple(name, signature, builder, notes=(), printed=None):
    return CatalogEntry(name, signature, None, tuple(notes), builder,
                        printed or {})


_REGISTRY: dict[str, CatalogEntry] = {}


def _register(entry: CatalogEntry) -> None:
    _REGISTRY[entry.name] = entry


_register(_simple(
    "standard", Signature(2, 2, 3, 3), _build_standard,
    notes=("Degree-1 block family: the third row of f is free; boundary "
           "analysis in numverify shows the off-diagonal free entries must "
           "vanish, leaving f = diag(Z, h) with |h| < 1.",)))

_register(_simple(
    "whitney_2x2", Signature(2, 2, 3, 3),
    lambda _t=None: _build_generalized_whitney(2, 2),
    notes=("Negative slots are ordered (w1^2, w1*w2, z1*w2); the classical "
           "listing orders them (w1^2, z1*w2, w1*w2), which is the same map "
           "up to a target slot permutation but would permute the columns "
           "of f.",)))

_register(_simple(
    "square_2x2", Signature(2, 2, 3, 3),
    lambda _t=None: _build_square_2x2(),
    notes=("Symmetric-square layout with mixed slots interleaved: "
           "g = [z1^2, sqrt(2) z1 z2, z2^2 | w^2 block].",)))

_register(CatalogEntry(
    "family_t_2244", Signature(2, 2, 4, 4),
    (Fraction(0), Fraction(1), False),
    ("t = 1 is excluded: the (3,2) entry of the printed matrix is 0/0 there; "
     "its exact value tends to 0 as t -> 1.",
     "The solver is underdetermined for this family (the degree-2 parameter "
     "monomial space is 3-dimensional while there are 4 positive slots); the "
     "printed matrix is the member with free row (sqrt(t) z3, sqrt(t) z4, 0, 0).",
     "At t = 0 the upper-left 3x3 block is the square_2x2 matrix; the t = 0 "
     "and t = 1 limits connect the two degree-2 classes."),
    _build_family_2244))

_register(CatalogEntry(
    "family_t_2234", Signature(2, 2, 3, 4),
    (Fraction(0), Fraction(1), True),
    ("Unique for t > 0; at t = 0 the third row is free (degree-1 block form "
     "after reduction).",),
    _build_family_2234))

_register(_simple(
    "degree3_2244", Signature(2, 2, 4, 4), _build_degree3,
    notes=("The printed source components x2*x3^3 and x3^2 are not "
           "homogeneous of degree 3; the expansion of L * (x1^2 + x1*x3 + "
           "x3^2) forces x2*x3^2 and x3^3.",
           "The printed matrix is not a solution of the corrected system; "
           "the solver output is authoritative and the printed form is kept "
           "for comparison."),
    printed=_DEGREE3_PRINTED))


def _build_square_2x2(_t=None) -> BuiltEntry:
    sig = Signature(2, 2, 3, 3)
    n = 4
    root2 = Surd(1, 2)
    g = MonomialBallMap(sig, [
        _slot(n, 1, (0, 2)), _slot(n, root2, (0, 1), (1, 1)),
        _slot(n, 1, (1, 2)),
    ], [
        _slot(n, 1, (2, 2)), _slot(n, root2, (2, 1), (3, 1)),
        _slot(n, 1, (3, 2)),
    ])
    z = 4
    f = SymbolicMatrixMap(3, 3, [
        [_zmono(z, 1, (0, 2)), _zmono(z, root2, (0, 1), (1, 1)),
         _zmono(z, 1, (1, 2))],
        [_zmono(z, root2, (0, 1), (2, 1)),
         _zmono(z, 1, (0, 1), (3, 1)) + _zmono(z, 1, (1, 1), (2, 1)),
         _zmono(z, root2, (1, 1), (3, 1))],
        [_zmono(z, 1, (2, 2)), _zmono(z, root2, (2, 1), (3, 1)),
         _zmono(z, 1, (3, 2))],
    ])
    return BuiltEntry(g, f, tuple())


_PARAMETRIC_FAMILY_NAMES = ("generalized_whitney", "symmetric_square")
_NAME_WITH_ARGS = re.compile(r"^([a-z_0-9]+)\((\d+)\s*,\s*(\d+)\)$")


def list_entries() -> list[str]:
    """All entry names; the (r, s)-parametric families list their base name."""
    return sorted(_REGISTRY) + [f"{name}(r,s)"
                                for name in _PARAMETRIC_FAMILY_NAMES]


def get(name: str, r: Optional[int] = None,
        s: Optional[int] = None) -> CatalogEntry:
    """Fetch an entry; (r, s)-families accept ``name(r,s)`` or keyword sizes."""
    match = _NAME_WITH_ARGS.match(name.strip())
    if match:
        name, r, s = match.group(1), int(match.group(2)), int(match.group(3))
    if name in _PARAMETRIC_FAMILY_NAMES:
        r = 2 if r is None else r
        s = 2 if s is None else s
        if name == "generalized_whitney":
            builder = lambda _t=None, r=r, s=s: _build_generalized_whitney(r, s)
            built = builder()
        else:
            builder = lambda _t=None, r=r, s=s: _build_symmetric_square(r, s)
            built = builder()
        return _simple(f"{name}({r},{s})", built.g.signature, builder,
                       notes=(f"Size-parametric family at (r, s) = ({r}, {s}).",))
    if name not in _REGISTRY:
        raise NotFoundError(name)
    return _REGISTRY[name]


# -- verification ---------------------------------------------------------------------------------------


@dataclass(frozen=True)
class VerifyEntryReport:
    name: str
    t: Optional[Fraction]
    solve_status: str
    matches_expected: bool
    residual_zero_solver: bool
    residual_zero_expected: bool
    free_entries: tuple[tuple[int, int], ...]
    typo_flags: tuple[str, ...]
    corrected_balance: Optional[str]
    solver_f: SymbolicMatrixMap
    expected_f: SymbolicMatrixMap

    @property
    def ok(self) -> bool:
        return (self.matches_expected and self.residual_zero_solver
                and self.residual_zero_expected)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "t": None if self.t is None else str(self.t),
            "solve_status": self.solve_status,
            "matches_expected": self.matches_expected,
            "residual_zero_solver": self.residual_zero_solver,
            "residual_zero_expected": self.residual_zero_expected,
            "free_entries": [list(p) for p in self.free_entries],
            "typo_flags": list(self.typo_flags),
            "corrected_balance": self.corrected_balance,
            "f": self.solver_f.to_json(),
        }


def verify_entry(name: str, t: Optional[Fraction] = None,
                 r: Optional[int] = None, s: Optional[int] = None
                 ) -> VerifyEntryReport:
    """Re-derive an entry with the solver and compare against the stored form.

    The comparison is exact and "up to free entries": when the system is
    underdetermined, the solver is re-run with the free entries pinned to the
    stored matrix's values, and the reconstruction must then agree entry by
    entry.  Printed forms kept in the notes are residual-checked and flagged
    when they fail.
    """
    entry = get(name, r=r, s=s)
    built = entry.build(t if entry.is_parametric else None)
    g, expected = built.g, built.f_expected
    outcome = solve_induced(g)
    solver_f = outcome.particular
    residual_solver = all(p.is_zero for p in residual_check(g, solver_f))
    residual_expected = all(p.is_zero for p in residual_check(g, expected))
    if outcome.status == SolveStatus.UNIQUE:
        matches = solver_f == expected
    elif outcome.status == SolveStatus.UNDERDETERMINED:
        pinned = {pos: expected.entry(*pos) for pos in outcome.free_entries}
        matches = solve_induced(g, free_values=pinned).particular == expected
    else:
        matches = False

    typo_flags: list[str] = []
    corrected_balance: Optional[str] = None
    printed = entry.printed
    if printed:
        n = g.signature.source_arity
        monomials = [parse_polynomial(text, n)
                     for text in printed["g_monomials"]]
        degrees = {m.total_degree() for m in monomials}
        if len(degrees) > 1:
            bad = [text for text, mono in zip(printed["g_monomials"], monomials)
                   if mono.total_degree() != g.degree]
            typo_flags.append(
                "printed components not homogeneous: " + ", ".join(bad))
        q_p = parse_polynomial(printed["q_p"], n)
        balance = SignatureLinearForm(g.signature.r, g.signature.s).polynomial() * q_p
        corrected_balance = balance.to_text()
        if balance != g.squared_norm_polynomial():
            typo_flags.append("stored map does not match L * Q_P")
        printed_f = SymbolicMatrixMap(
            expected.rp, expected.sp,
            [[parse_polynomial(text, expected.arity, prefix="z")
              for text in row] for row in printed["f_entries"]])
        printed_residual = residual_check(g, printed_f)
        if any(not p.is_zero for p in printed_residual):
            typo_flags.append(
                "printed matrix fails the construction identity; "
                "solver output is authoritative")
    return VerifyEntryReport(
        name=entry.name,
        t=t if entry.is_parametric else None,
        solve_status=outcome.status.value,
        matches_expected=matches,
        residual_zero_solver=residual_solver,
        residual_zero_expected=residual_expected,
        free_entries=outcome.free_entries,
        typo_flags=tuple(typo_flags),
        corrected_balance=corrected_balance,
        solver_f=solver_f,
        expected_f=expected,
    )
