from fractions import Fraction

import pytest

from ballmaps.ballmap import MapComponent, MonomialBallMap, Signature
from ballmaps.exactnum import Surd, SurdSum
from ballmaps.induce import (
    BallPoint,
    DegenerateFiberError,
    IndependenceStatus,
    NonPolynomialSolutionError,
    SolveStatus,
    SymbolicMatrixMap,
    ball_fiber,
    build_system,
    domain_fiber,
    independence_check,
    residual_check,
    solve_induced,
)
from ballmaps.poly import Polynomial, parse_polynomial


def comp(exponents, coeff=Surd(1)):
    return MapComponent(coeff, exponents)


SIG = Signature(2, 2, 3, 3)
ROOT2 = Surd(1, 2)


def whitney_map():
    # negative slots ordered (w1^2, w1*w2, z1*w2) so columns follow suit
    return MonomialBallMap(
        SIG,
        [comp((2, 0, 0, 0)), comp((1, 1, 0, 0)), comp((0, 1, 1, 0))],
        [comp((0, 0, 2, 0)), comp((0, 0, 1, 1)), comp((1, 0, 0, 1))])


def square_map():
    return MonomialBallMap(
        SIG,
        [comp((2, 0, 0, 0)), comp((1, 1, 0, 0), ROOT2), comp((0, 2, 0, 0))],
        [comp((0, 0, 2, 0)), comp((0, 0, 1, 1), ROOT2), comp((0, 0, 0, 2))])


def padded_identity():
    return MonomialBallMap(
        SIG,
        [comp((1, 0, 0, 0)), comp((0, 1, 0, 0)), None],
        [comp((0, 0, 1, 0)), comp((0, 0, 0, 1)), None])


def zp(text):
    return parse_polynomial(text, 4, prefix="z")


def matrix(rows):
    return SymbolicMatrixMap(len(rows), len(rows[0]),
                             [[zp(t) for t in row] for row in rows])


WHITNEY_F = matrix([
    ["z1^2", "z1*z2", "z2"],
    ["z1*z3", "z2*z3", "z4"],
    ["z3", "z4", "0"],
])

SQUARE_F = matrix([
    ["z1^2", "sqrt(2)*z1*z2", "z2^2"],
    ["sqrt(2)*z1*z3", "z1*z4 + z2*z3", "sqrt(2)*z2*z4"],
    ["z3^2", "sqrt(2)*z3*z4", "z4^2"],
])


def test_ball_fiber_examples():
    constraint = ball_fiber(BallPoint((1, 0), (0, 0)))
    assert constraint.a == (1, 0) and constraint.b == (0, 0)
    # a Z = 0 with a = (1, 0) kills the first row of Z
    assert ball_fiber(BallPoint((0, 1), (0, 0))).a == (0, 1)
    with pytest.raises(DegenerateFiberError):
        ball_fiber(BallPoint((0, 0), (1, 0)))


def test_domain_fiber_symbolic():
    fiber = domain_fiber(2, 2)
    names = ["x1", "x2", "z1", "z2", "z3", "z4"]
    assert [p.to_text(names=names) for p in fiber] == [
        "x1", "x2", "x1*z1 + x2*z3", "x1*z2 + x2*z4"]
    z0 = [Fraction(0)] * 4
    specialized = [p.evaluate([Fraction(1), Fraction(1)] + z0) for p in fiber]
    assert specialized == [1, 1, 0, 0]


def test_domain_fiber_matches_numeric_product():
    import numpy as np

    rng = np.random.default_rng(5)
    x = rng.normal(size=2) + 1j * rng.normal(size=2)
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    fiber = domain_fiber(2, 2)
    point = list(x) + list(z.reshape(-1))
    values = [p.evaluate(point) for p in fiber]
    expected = list(x) + list(x @ z)
    assert max(abs(a - b) for a, b in zip(values, expected)) < 1e-12


def test_build_system_whitney_rhs():
    system = build_system(whitney_map())
    assert system.x_monomials == ((2, 0), (1, 1), (0, 2))
    # third negative slot z1*w2 -> x1 * (XZ)_2 collects {x1^2: z2, x1x2: z4}
    rhs = system.rhs[2]
    assert rhs[0] == zp("z2")
    assert rhs[1] == zp("z4")
    assert rhs[2] == zp("0")
    # first column of the matrix is the x1^2 slot
    assert system.matrix[0][0] == zp("1")
    assert system.matrix[1][2] == zp("z1")
    assert system.matrix[2][2] == zp("z3")


def test_build_system_identity_shape():
    system = build_system(padded_identity())
    assert system.x_monomials == ((1, 0), (0, 1))
    assert system.matrix[0][0] == zp("1")
    assert system.matrix[1][1] == zp("1")
    assert all(entry.is_zero for row in system.matrix for entry in (row[2],))


def test_solve_whitney_reproduces_block_matrix():
    outcome = solve_induced(whitney_map())
    assert outcome.status == SolveStatus.UNIQUE
    assert outcome.free_entries == ()
    assert outcome.particular == WHITNEY_F
    assert all(p.is_zero for p in residual_check(whitney_map(),
                                                 outcome.particular))


def test_solve_square_reproduces_symmetric_square():
    outcome = solve_induced(square_map())
    assert outcome.status == SolveStatus.UNIQUE
    assert outcome.particular == SQUARE_F
    assert outcome.particular.entry(1, 1) == zp("z1*z4 + z2*z3")
    assert all(p.is_zero for p in residual_check(square_map(),
                                                 outcome.particular))


def test_solve_padded_identity_underdetermined():
    outcome = solve_induced(padded_identity())
    assert outcome.status == SolveStatus.UNDERDETERMINED
    assert outcome.free_entries == ((2, 0), (2, 1), (2, 2))
    assert outcome.free_columns_zero
    assert outcome.particular == matrix([
        ["z1", "z2", "0"], ["z3", "z4", "0"], ["0", "0", "0"]])
    # the residual vanishes for every assignment of the free row
    pinned = solve_induced(padded_identity(), free_values={
        (2, 0): zp("z1*z4"), (2, 1): zp("0"), (2, 2): zp("1/2")})
    assert all(p.is_zero
               for p in residual_check(padded_identity(), pinned.particular))


def test_residual_detects_perturbation():
    broken = WHITNEY_F.with_entry(0, 0, zp("z1"))
    residuals = residual_check(whitney_map(), broken)
    assert any(not p.is_zero for p in residuals)


def test_residual_mixed_pairing_nonzero():
    residuals = residual_check(square_map(), WHITNEY_F)
    assert any(not p.is_zero for p in residuals)


def test_independence_examples():
    assert independence_check(square_map()).status \
        == IndependenceStatus.INDEPENDENT
    report = independence_check(padded_identity())
    assert report.status == IndependenceStatus.DEPENDENT_EVERYWHERE
    assert report.rank == 2
    # artificial third slot equal to the sum of the first two
    dependent = MonomialBallMap(
        Signature(2, 1, 3, 2),
        [comp((2, 0, 0)), comp((1, 1, 0)), None],
        [comp((1, 0, 1)), comp((0, 1, 1))])
    rep = independence_check(dependent)
    assert rep.status == IndependenceStatus.DEPENDENT_EVERYWHERE
    assert rep.rank == 2


def test_independent_catalog_maps_solve_unique():
    for g in (whitney_map(), square_map()):
        if independence_check(g).status == IndependenceStatus.INDEPENDENT:
            assert solve_induced(g).status == SolveStatus.UNIQUE


def test_inconsistent_system():
    g = MonomialBallMap(
        Signature(2, 1, 2, 1),
        [comp((2, 0, 0)), comp((0, 2, 0))],
        [comp((0, 0, 2))])
    outcome = solve_induced(g)
    assert outcome.status == SolveStatus.INCONSISTENT
    assert outcome.particular is None


def test_non_polynomial_solution_detected():
    # g1 = w^2, g2 = z*w on D(1,1): f must be z^{-1}, which is not polynomial
    g = MonomialBallMap(
        Signature(1, 1, 1, 1),
        [comp((0, 2))],
        [comp((1, 1))])
    with pytest.raises(NonPolynomialSolutionError):
        solve_induced(g)


def test_matrix_map_json_round_trip():
    data = SQUARE_F.to_json()
    rebuilt = SymbolicMatrixMap.from_json(data, arity=4)
    assert rebuilt == SQUARE_F
    assert data["entries"][1][1] == "z1*z4 + z2*z3"


def test_ball_point_margin():
    interior = BallPoint((1, 0), (Fraction(1, 2), 0))
    assert interior.margin() > 0
    boundary = BallPoint((1, 0), (1, 0))
    assert abs(boundary.margin()) < 1e-15
