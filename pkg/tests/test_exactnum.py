from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ballmaps.exactnum import (
    DomainError,
    Surd,
    SurdSum,
    UnsupportedExtensionError,
    parse_surdsum,
    squarefree_decompose,
    surd_normalize,
)


def test_squarefree_decompose():
    assert squarefree_decompose(8) == (2, 2)
    assert squarefree_decompose(1) == (1, 1)
    assert squarefree_decompose(36) == (6, 1)
    assert squarefree_decompose(12) == (2, 3)
    assert squarefree_decompose(30) == (1, 30)


def test_surd_normalize_examples():
    assert surd_normalize(1, 8) == Surd(2, 2)
    assert surd_normalize(1, 1) == Surd(1, 1)
    assert surd_normalize(1, Fraction(3, 2)) == Surd(Fraction(1, 2), 6)


def test_surd_normalize_rejects_nonpositive():
    with pytest.raises(DomainError):
        surd_normalize(1, 0)
    with pytest.raises(DomainError):
        surd_normalize(1, Fraction(-3, 2))


def test_surd_canonical_zero():
    assert Surd(0, 7) == Surd(0, 1)
    assert Surd(0, 7).radicand == 1


def test_surd_from_square():
    assert Surd.from_square(2) == Surd(1, 2)
    assert Surd.from_square(Fraction(1, 2)) == Surd(Fraction(1, 2), 2)
    s = Surd.from_square(Fraction(7, 4))
    assert s.square() == Fraction(7, 4)


def test_surd_product_and_division():
    r2 = Surd(1, 2)
    r3 = Surd(1, 3)
    assert r2 * r2 == Surd(2, 1)
    assert r2 * r3 == Surd(1, 6)
    assert (r2 / r3).square() == Fraction(2, 3)
    assert r2.inverse() == Surd(Fraction(1, 2), 2)


def test_surdsum_arith_examples():
    r2 = SurdSum.sqrt(2)
    assert r2 * r2 == 2
    assert r2 * SurdSum.sqrt(3) == SurdSum.sqrt(6)
    assert (1 + r2) * (1 - r2) == -1


def test_surdsum_inverse_examples():
    assert SurdSum.from_value(2).inverse() == Fraction(1, 2)
    assert SurdSum.sqrt(2).inverse() == SurdSum({2: Fraction(1, 2)})
    assert (1 + SurdSum.sqrt(2)).inverse() == SurdSum({1: -1, 2: 1})


def test_surdsum_inverse_errors():
    with pytest.raises(ZeroDivisionError):
        SurdSum.zero().inverse()
    wide = SurdSum({p: 1 for p in (2, 3, 5, 7, 11, 13, 17, 19, 23)})
    with pytest.raises(UnsupportedExtensionError):
        wide.inverse()


def test_surdsum_to_float():
    assert abs(float(SurdSum.sqrt(2)) - 1.4142135623730951) < 1e-15
    assert float(SurdSum.zero()) == 0.0
    assert abs(float(1 + SurdSum.sqrt(2)) - 2.414213562373095) < 1e-15
    import mpmath

    high = SurdSum.sqrt(2).to_float(200)
    with mpmath.workprec(220):
        assert abs(high * high - 2) < mpmath.mpf(2) ** -190


def test_surdsum_canonicalizes_radicands():
    assert SurdSum({8: 1}) == SurdSum({2: 2})
    assert SurdSum({4: 1}) == 2


def test_surdsum_text_round_trip():
    values = [
        SurdSum.zero(),
        SurdSum.from_value(Fraction(-3, 4)),
        SurdSum({1: Fraction(1, 2), 2: 3}),
        SurdSum({2: -1, 6: Fraction(2, 5)}),
        1 - SurdSum({7: Fraction(1, 14)}),
    ]
    for v in values:
        assert parse_surdsum(str(v)) == v


rationals = st.fractions(
    min_value=Fraction(-20), max_value=Fraction(20), max_denominator=6)
radicands = st.sampled_from([1, 2, 3, 5, 6, 7, 10, 15])


@st.composite
def surds(draw):
    return Surd(draw(rationals), draw(radicands))


@st.composite
def surdsums(draw, max_terms=3):
    picks = draw(st.lists(st.tuples(radicands, rationals), max_size=max_terms))
    return SurdSum({}) + sum((Surd(q, d).to_surdsum() for d, q in picks),
                             SurdSum.zero())


@given(surds(), surds())
def test_surd_product_squares_to_rational(a, b):
    assert (a * b).square() == a.square() * b.square()


@settings(max_examples=300)
@given(surdsums())
def test_surdsum_inverse_round_trip(a):
    if a.is_zero:
        return
    assert a * a.inverse() == 1


@given(surdsums(), surdsums())
def test_surdsum_canonical_difference(a, b):
    assert (a - a).is_zero
    assert (a + b) - b == a


@given(surdsums())
def test_surdsum_structural_equality(a):
    rebuilt = SurdSum(dict(a.terms()))
    assert rebuilt == a
    assert hash(rebuilt) == hash(a)
