"""
Tests for basis ranging in parametric_lp.analysis.sensitivity
"""

import os
import sys
myPath = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, myPath + '/../../')

import math
from fractions import Fraction

import numpy as np
import pytest
from pytest import raises

from parametric_lp.analysis.sensitivity import (ThetaInterval,
                                                default_theta_grid,
                                                objective_interval,
                                                perturbed_certificate,
                                                ray_interval, rhs_interval,
                                                verify_interval)
from parametric_lp.exceptions import (DegenerateBasisWarning,
                                      DimensionMismatch, LinearityViolation,
                                      NotOptimal, NotOptimalBasic,
                                      RectangularBasis, ZeroDelta)
from parametric_lp.lp.linalg import rank
from parametric_lp.lp.problem import LpProblem, ObjectiveRay, RhsRay
from parametric_lp.lp.solver import (BasicPoint, solve, solve_optimal,
                                     verify_kkt)
from parametric_lp.utilities import (example1_family, random_problem,
                                     random_rhs_direction)


def representative(problem):
    return solve_optimal(problem).representative


def seven_point_grid(iv):
    """Both finite endpoints, thirds in between and zero; infinite sides
    are replaced by 3."""
    lo = iv.lo if abs(iv.lo) != math.inf else Fraction(-3)
    hi = iv.hi if abs(iv.hi) != math.inf else Fraction(3)
    return sorted({lo, 2 * lo / 3, lo / 3, Fraction(0), hi / 3, 2 * hi / 3,
                   hi})


def test_rhs_interval_identity_basis():
    problem = LpProblem([1, 1], [[1, 0], [0, 1]], [1, 2])
    iv = rhs_interval(problem, representative(problem), [1, -1])
    assert (iv.lo, iv.hi, iv.slope, iv.base_value) == (-1, 2, 0, 3)
    assert not iv.degenerate
    report = verify_interval(problem, RhsRay([1, -1]), iv, [-1, 0, 1, 2, 3])
    assert report.all_match
    assert [row.value for row in report.rows] == [3, 3, 3, 3, None]
    assert report.rows[-1].status == "infeasible"
    assert not report.rows[-1].inside


def test_rhs_interval_along_b():
    problem = LpProblem([1, 1], [[1, 0], [0, 1]], [1, 2])
    iv = rhs_interval(problem, representative(problem), problem.b)
    assert iv.lo == -1 and iv.hi == math.inf
    assert iv.slope == iv.base_value == 3
    assert iv.to_dict() == {"lo": "-1", "hi": "+inf", "slope": "3",
                            "base_value": "3", "degenerate": False}


def test_rhs_interval_example1():
    problem = example1_family().instantiate(1)
    bp = BasicPoint([1, 0], (0,), (0,))
    iv = rhs_interval(problem, bp, [1])
    assert (iv.lo, iv.hi, iv.slope) == (-1, math.inf, 1)
    for theta in (-1, Fraction(-1, 2), 0, 5):
        assert solve(RhsRay([1]).apply(problem, theta)).value == 1 + theta


def test_objective_interval():
    problem = LpProblem([2, 1], [[1, 1]], [1])
    iv = objective_interval(problem, representative(problem), [0, 1])
    assert iv.lo == -math.inf and iv.hi == 1
    assert iv.slope == 0 and iv.base_value == 2
    assert iv.kind == "delta_p"
    # the upper bound is tight
    assert solve(ObjectiveRay([0, 1]).apply(problem, 2)).value == 3
    report = verify_interval(problem, ObjectiveRay([0, 1]), iv, [0, 1, 2])
    assert [row.matches for row in report.rows] == [True, True, False]
    assert report.all_match


def test_objective_interval_along_p():
    problem = LpProblem([2, 1], [[1, 1]], [1])
    iv = objective_interval(problem, representative(problem), problem.p)
    assert iv.lo == -1 and iv.hi == math.inf
    assert iv.slope == 2
    for theta in (-1, Fraction(-1, 2), 3):
        scaled = LpProblem([(1 + theta) * v for v in problem.p], problem.A,
                           problem.b)
        assert solve(scaled).value == (1 + theta) * 2


def test_objective_interval_without_nonbasic_columns():
    problem = LpProblem([1, 1], [[1, 0], [0, 1]], [1, 2])
    iv = objective_interval(problem, representative(problem), [1, 0])
    assert iv.lo == -math.inf and iv.hi == math.inf
    assert iv.slope == 1


def test_ray_interval_uses_representative():
    problem = LpProblem([2, 1], [[1, 1]], [1])
    iv = ray_interval(problem, RhsRay([1]))
    assert iv.kind == "delta_b"
    assert list(iv.basic_point.x) == [1, 0]
    assert (iv.lo, iv.hi, iv.slope) == (-1, math.inf, 2)
    with raises(NotOptimal):
        ray_interval(LpProblem([1], [[1]], [-1]), RhsRay([1]))


def test_degenerate_interval_touches_zero():
    # x = (1, 0, 0, 0) is degenerate in the second row
    problem = LpProblem([1, -2, -1, 0], [[1, 0, 0, 0], [0, 1, 1, -1]], [1, 0])
    iv = rhs_interval(problem, representative(problem), [0, -1])
    assert iv.degenerate
    assert iv.lo <= 0 <= iv.hi
    assert iv.hi == 0


def test_ranging_errors():
    problem = LpProblem([2, 1], [[1, 1]], [1])
    bp = representative(problem)
    with raises(ZeroDelta):
        rhs_interval(problem, bp, [0])
    with raises(ZeroDelta):
        objective_interval(problem, bp, [0, 0])
    with raises(DimensionMismatch):
        rhs_interval(problem, bp, [1, 1])
    with raises(NotOptimalBasic):
        rhs_interval(problem, BasicPoint([0, 1], (1,), (1,)), [1])

    rank_deficient = LpProblem([1, 0], [[1, 1], [2, 2]], [1, 2])
    with pytest.warns(DegenerateBasisWarning):
        bp = representative(rank_deficient)
    with raises(RectangularBasis):
        rhs_interval(rank_deficient, bp, [1, 2])


def test_linearity_violation_names_theta():
    problem = LpProblem([1, 1], [[1, 0], [0, 1]], [1, 2])
    bp = representative(problem)
    wrong = ThetaInterval(-1, 2, Fraction(1), Fraction(3), bp, False,
                          "delta_b")
    with raises(LinearityViolation) as err:
        verify_interval(problem, RhsRay([1, -1]), wrong, [0, 1])
    assert err.value.theta == 1
    with raises(ValueError):
        verify_interval(problem, ObjectiveRay([1, 0]), wrong, [0])


def test_default_theta_grid():
    problem = LpProblem([1, 1], [[1, 0], [0, 1]], [1, 2])
    iv = rhs_interval(problem, representative(problem), [1, -1])
    assert default_theta_grid(iv) == [-1, Fraction(-1, 2), 0, 1, 2]
    iv = rhs_interval(problem, representative(problem), [1, 2])
    assert default_theta_grid(iv) == [-1, Fraction(-1, 2), 0]


def test_verification_frame():
    problem = LpProblem([2, 1], [[1, 1]], [1])
    iv = ray_interval(problem, ObjectiveRay([0, 1]))
    frame = verify_interval(problem, ObjectiveRay([0, 1]), iv,
                            default_theta_grid(iv)).to_frame()
    assert list(frame.columns) == ["theta", "inside", "status", "value",
                                   "predicted", "matches"]
    assert list(frame["theta"]) == ["0", "1/2", "1"]
    assert frame["matches"].all()


def test_perturbed_certificate():
    problem = LpProblem([1, 1], [[1, 0], [0, 1]], [1, 2])
    ray = RhsRay([1, -1])
    iv = ray_interval(problem, ray)
    certificate = perturbed_certificate(problem, ray, iv, 2)
    assert list(certificate.x) == [3, 0]
    assert certificate.support == (0,)
    assert verify_kkt(ray.apply(problem, 2), certificate.x, certificate.y)

    problem = LpProblem([2, 1], [[1, 1]], [1])
    ray = ObjectiveRay([0, 1])
    iv = ray_interval(problem, ray)
    certificate = perturbed_certificate(problem, ray, iv, 1)
    assert list(certificate.x) == [1, 0]
    assert list(certificate.y) == [2]
    assert verify_kkt(ray.apply(problem, 1), certificate.x, certificate.y)


def check_random_ranging(rng, count):
    checked = 0
    while checked < count:
        m = int(rng.integers(1, 4))
        n = int(rng.integers(m, 7))
        problem = random_problem(m, n, rng)
        outcome = solve(problem)
        if not outcome.is_optimal or rank(problem.A) < m:
            continue
        bp = outcome.representative
        for ray in (RhsRay(random_rhs_direction(m, rng)),
                    ObjectiveRay(random_rhs_direction(n, rng))):
            iv = ray_interval(problem, ray, bp)
            assert iv.lo <= 0 <= iv.hi
            if not iv.degenerate:
                assert iv.lo < 0 < iv.hi
            grid = seven_point_grid(iv)
            assert verify_interval(problem, ray, iv, grid).all_match
            for theta in grid:
                certificate = perturbed_certificate(problem, ray, iv, theta)
                assert verify_kkt(ray.apply(problem, theta), certificate.x,
                                  certificate.y)
        checked += 1


def test_random_ranging():
    check_random_ranging(np.random.default_rng(42), 15)


@pytest.mark.slow
def test_random_ranging_corpus():
    check_random_ranging(np.random.default_rng(100), 100)
