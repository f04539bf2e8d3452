from fractions import Fraction

import pytest

from ballmaps.ballmap import (
    MapComponent,
    MonomialBallMap,
    Signature,
    properness_certificate,
)
from ballmaps.classify import (
    InfeasibleError,
    ScaleError,
    brute_force_search,
    classify_degree2_r2,
    enumerate_linear_QP,
    lemma_harness,
    qp_to_map,
)
from ballmaps.exactnum import Surd
from ballmaps.poly import Polynomial, parse_polynomial


def P4(text):
    return parse_polynomial(text, 4)


SIG = Signature(2, 2, 3, 3)

NINE = [
    "x1", "x2", "x3", "x4",
    "x1 + x3", "x1 + x4", "x2 + x3", "x2 + x4",
    "x1 + x2 + x3 + x4",
]


def comp(exponents, coeff=Surd(1)):
    return MapComponent(coeff, exponents)


def whitney_map():
    return MonomialBallMap(
        SIG,
        [comp((2, 0, 0, 0)), comp((1, 1, 0, 0)), comp((0, 1, 1, 0))],
        [comp((0, 0, 2, 0)), comp((1, 0, 0, 1)), comp((0, 0, 1, 1))])


def square_map():
    root2 = Surd(1, 2)
    return MonomialBallMap(
        SIG,
        [comp((2, 0, 0, 0)), comp((1, 1, 0, 0), root2), comp((0, 2, 0, 0))],
        [comp((0, 0, 2, 0)), comp((0, 0, 1, 1), root2), comp((0, 0, 0, 2))])


def test_enumerate_linear_qp_is_exactly_the_nine():
    found = set(enumerate_linear_QP())
    assert found == {P4(text) for text in NINE}
    assert len(found) == 9


def test_enumerate_excludes_x3_plus_x4():
    assert P4("x3 + x4") not in set(enumerate_linear_QP())
    balance = parse_polynomial("x1 + x2 - x3 - x4", 4) * P4("x3 + x4")
    assert balance.count_monomials() == 7  # needs 7 slots > 6


def test_qp_to_map_examples():
    full = qp_to_map(P4("x1 + x2 + x3 + x4"), 1, SIG)
    assert full.canonical_form() == square_map().canonical_form()
    partial = qp_to_map(P4("x1 + x3"), 1, SIG)
    assert partial.canonical_form() == whitney_map().canonical_form()
    with pytest.raises(InfeasibleError):
        qp_to_map(P4("x3 + x4"), 1, SIG)


def test_classify_degree2_r2():
    report = classify_degree2_r2()
    expected = {whitney_map().canonical_form(), square_map().canonical_form()}
    assert set(report.representatives) == expected
    assert len(report.representatives) == 2
    # all four single-variable cofactors collapse to one degree-1 class
    assert len(report.reduced_representatives) == 1
    assert report.reduced_representatives[0].degree == 1
    assert report.rejected_count == 0
    assert len(report.candidate_cofactors) == 9
    # bookkeeping: nine candidates = accepted-class sources + reduced sources
    assert report.rejected_count == 9 - 5 - 4


def test_every_representative_is_certified_proper():
    report = classify_degree2_r2()
    for g in report.representatives + report.reduced_representatives:
        cert = properness_certificate(g)
        assert cert.is_positive
        assert cert.q_p.count_monomials() >= 1
        balance = g.squared_norm_polynomial()
        assert balance.count_monomials() <= 2 * 2 + 2


def test_classifier_report_json_is_deterministic():
    import json

    first = json.dumps(classify_degree2_r2().to_json(), sort_keys=True)
    second = json.dumps(classify_degree2_r2().to_json(), sort_keys=True)
    assert first == second


@pytest.mark.parametrize("lemma", ["3.1", "3.2", "3.3", "3.5"])
def test_lemma_harnesses_find_no_violations(lemma):
    assert lemma_harness(lemma, 300, 20240531) == []


def test_lemma_harness_targeted_bounds():
    assert lemma_harness("3.2", 300, 5, {"vars": 4}) == []
    assert lemma_harness("3.3", 300, 6, {"r": 3}) == []


def test_lemma_harness_is_reproducible():
    a = lemma_harness("3.5", 50, 99)
    b = lemma_harness("3.5", 50, 99)
    assert a == b


def test_brute_force_degree2_agrees_with_classifier():
    records = brute_force_search(SIG, 2, [1, 2])
    degree2 = {rec.map for rec in records if rec.map.degree == 2}
    report = classify_degree2_r2()
    assert degree2 == set(report.representatives)


def test_brute_force_degree1_standard_family():
    records = brute_force_search(SIG, 1, [1])
    maps = [rec.map for rec in records]
    # every survivor is a member of the degree-1 standard family: a constant
    # cofactor, hence an identity block plus an optional repeated slot
    assert all(rec.q_p.total_degree() == 0 for rec in records)
    identity = MonomialBallMap(
        SIG,
        [comp((0, 1, 0, 0)), comp((1, 0, 0, 0)), None],
        [comp((0, 0, 0, 1)), comp((0, 0, 1, 0)), None])
    assert identity in maps
    assert len(maps) == 3


def test_brute_force_without_coeffsq_2_misses_square_map():
    records = brute_force_search(SIG, 2, [1])
    degree2 = {rec.map for rec in records if rec.map.degree == 2}
    assert degree2 == {whitney_map().canonical_form()}


def test_brute_force_scale_guard():
    with pytest.raises(ScaleError):
        brute_force_search(Signature(3, 2, 4, 4), 2, [1])
    with pytest.raises(ScaleError):
        brute_force_search(SIG, 4, [1])
    with pytest.raises(ScaleError):
        brute_force_search(SIG, 2, list(range(1, 10)))
