"""Acceptance suite: one test per criterion, each printing a PASS line.

Every expected value here is exact; the numeric layer uses the stated margins
(interior 1e-9, fiber residual 1e-10 relative, boundary final margin 1e-2).
"""

import time
from fractions import Fraction

import pytest

from ballmaps.ballmap import Signature, properness_certificate
from ballmaps.catalog import ParamError, get, verify_entry
from ballmaps.classify import (
    brute_force_search,
    classify_degree2_r2,
    enumerate_linear_QP,
    lemma_harness,
)
from ballmaps.induce import SolveStatus, residual_check, solve_induced
from ballmaps.numverify import (
    shilov_obstruction_demo,
    verify_boundary_behavior,
    verify_fiber_preservation,
    verify_map_into_domain,
)
from ballmaps.poly import parse_polynomial


class Criterion:
    def __init__(self, number, budget_seconds):
        self.number = number
        self.budget = budget_seconds
        self.start = time.perf_counter()

    def done(self):
        elapsed = time.perf_counter() - self.start
        assert elapsed < self.budget, (
            f"criterion {self.number} exceeded its {self.budget}s budget "
            f"({elapsed:.1f}s)")
        print(f"ACCEPTANCE {self.number}: PASS ({elapsed:.2f}s)")


def test_criterion_1_linear_cofactor_enumeration():
    crit = Criterion(1, 1.0)
    found = set(enumerate_linear_QP(2))
    expected = {parse_polynomial(text, 4) for text in (
        "x1", "x2", "x3", "x4",
        "x1 + x3", "x1 + x4", "x2 + x3", "x2 + x4",
        "x1 + x2 + x3 + x4")}
    assert found == expected
    crit.done()


def test_criterion_2_degree2_classification_vs_oracle():
    crit = Criterion(2, 60.0)
    report = classify_degree2_r2()
    whitney = get("whitney_2x2").build().g.canonical_form()
    square = get("square_2x2").build().g.canonical_form()
    assert set(report.representatives) == {whitney, square}
    assert len(report.representatives) == 2
    records = brute_force_search(Signature(2, 2, 3, 3), 2, [1, 2])
    oracle_degree2 = {rec.map for rec in records if rec.map.degree == 2}
    assert oracle_degree2 == set(report.representatives)
    crit.done()


WHITNEY_TEXT = [["z1^2", "z1*z2", "z2"],
                ["z1*z3", "z2*z3", "z4"],
                ["z3", "z4", "0"]]
SQUARE_TEXT = [["z1^2", "sqrt(2)*z1*z2", "z2^2"],
               ["sqrt(2)*z1*z3", "z1*z4 + z2*z3", "sqrt(2)*z2*z4"],
               ["z3^2", "sqrt(2)*z3*z4", "z4^2"]]


@pytest.mark.parametrize("name,expected_text", [
    ("whitney_2x2", WHITNEY_TEXT),
    ("square_2x2", SQUARE_TEXT),
])
def test_criterion_3_matrix_reconstruction(name, expected_text):
    crit = Criterion(f"3[{name}]", 10.0)
    built = get(name).build()
    outcome = solve_induced(built.g)
    assert outcome.status == SolveStatus.UNIQUE
    rendered = [[entry.to_text(prefix="z") for entry in row]
                for row in outcome.particular.entries]
    assert rendered == expected_text
    assert all(p.is_zero for p in residual_check(built.g, outcome.particular))
    crit.done()


def test_criterion_4_degree1_family():
    crit = Criterion(4, 10.0)
    built = get("standard").build()
    outcome = solve_induced(built.g)
    assert outcome.status == SolveStatus.UNDERDETERMINED
    assert outcome.free_entries == ((2, 0), (2, 1), (2, 2))
    assert outcome.free_columns_zero
    rendered = [[entry.to_text(prefix="z") for entry in row]
                for row in outcome.particular.entries]
    assert rendered == [["z1", "z2", "0"], ["z3", "z4", "0"], ["0", "0", "0"]]
    crit.done()


def test_criterion_5_parametric_families():
    crit = Criterion(5, 30.0)
    for t in (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        for name in ("family_t_2244", "family_t_2234"):
            report = verify_entry(name, t)
            assert report.residual_zero_solver, (name, t)
            assert report.residual_zero_expected, (name, t)
            assert report.matches_expected, (name, t)
    with pytest.raises(ParamError):
        get("family_t_2244").build(Fraction(1))
    crit.done()


def test_criterion_6_generalized_examples():
    crit = Criterion(6, 120.0)
    for r in (2, 3, 4):
        for s in (2, 3, 4):
            report = verify_entry(f"generalized_whitney({r},{s})")
            assert report.residual_zero_solver and report.matches_expected
    for r in (2, 3):
        for s in (2, 3):
            report = verify_entry(f"symmetric_square({r},{s})")
            assert report.residual_zero_solver and report.matches_expected
    crit.done()


def test_criterion_7_degree3_example():
    crit = Criterion(7, 10.0)
    report = verify_entry("degree3_2244")
    assert report.residual_zero_solver and report.matches_expected
    flags = " ".join(report.typo_flags)
    assert "x2*x3^3" in flags and "x3^2" in flags
    assert report.corrected_balance is not None
    corrected = parse_polynomial(report.corrected_balance, 4)
    expected = parse_polynomial("x1 + x2 - x3 - x4", 4) * parse_polynomial(
        "x1^2 + x1*x3 + x3^2", 4)
    assert corrected == expected
    crit.done()


def test_criterion_8_lemma_harnesses():
    crit = Criterion(8, 60.0)
    assert lemma_harness("3.1", 1000, 101) == []
    assert lemma_harness("3.2", 1000, 102) == []
    violations = lemma_harness("3.3", 1000, 103)
    assert violations == []
    assert lemma_harness("3.3", 1000, 104, {"r": 3}) == []
    assert lemma_harness("3.5", 1000, 105) == []
    crit.done()


CATALOG_FS = [
    ("standard", None),
    ("whitney_2x2", None),
    ("square_2x2", None),
    ("degree3_2244", None),
    ("family_t_2244", Fraction(1, 2)),
    ("family_t_2234", Fraction(1, 2)),
] + [(f"generalized_whitney({r},{s})", None)
     for r in (2, 3, 4) for s in (2, 3, 4)] \
  + [(f"symmetric_square({r},{s})", None) for r in (2, 3) for s in (2, 3)]


def test_criterion_9_numeric_verification():
    crit = Criterion(9, 120.0)
    for name, t in CATALOG_FS:
        built = get(name).build(t)
        sig = built.g.signature
        interior = verify_map_into_domain(built.f_expected, sig.r, sig.s,
                                          trials=1000, seed=90)
        assert interior.passed, name
        assert interior.min_margin_interior > 1e-9, name
        boundary = verify_boundary_behavior(built.f_expected, sig.r, sig.s,
                                            seed=91)
        assert boundary.passed, name
        assert all(row[-1] < 1e-2 for row in boundary.boundary_margins), name
        fiber = verify_fiber_preservation(built.f_expected, built.g,
                                          trials=1000, seed=92)
        assert fiber.passed, name
        assert fiber.fiber_residual_max < 1e-10, name
    crit.done()


def test_criterion_10_shilov_obstruction():
    crit = Criterion(10, 30.0)
    sheared = shilov_obstruction_demo([Fraction(1, 2), 0, 0], samples=1000,
                                      seed=7)
    assert sheared.verdict == "ObstructionFound"
    assert sheared.detail["min_value"] < 0
    for h in (0, 0.5, 0.9):
        diagonal = shilov_obstruction_demo([0, 0, h], samples=1000, seed=7)
        assert diagonal.verdict == "NoObstruction", h
    crit.done()
