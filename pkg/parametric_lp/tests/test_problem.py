"""
Tests for problems, duals, families and rays in parametric_lp.lp.problem
"""

import os
import sys
myPath = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, myPath + '/../../')

from fractions import Fraction

import numpy as np
from pytest import raises

from parametric_lp.exceptions import DimensionMismatch, SchemaError
from parametric_lp.lp.linalg import matrix_norm_squared, norm_squared
from parametric_lp.lp.problem import (DualProblem, LpProblem, ObjectiveRay,
                                      PerturbationRay, ProblemFamily, RhsRay,
                                      dual_of, instantiate, parse_family,
                                      parse_problem, parse_vector,
                                      serialize_family, serialize_problem)
from parametric_lp.utilities import example1_family


def test_parse_problem():
    problem = parse_problem('{"p":["1"],"A":[["1"]],"b":["1"]}')
    assert (problem.m, problem.n) == (1, 1)
    assert problem.p[0] == 1 and problem.A[0, 0] == 1 and problem.b[0] == 1

    problem = parse_problem('{"p":["1/2","0"],"A":[["1/2","1"]],"b":["1"]}')
    assert list(problem.p) == [Fraction(1, 2), 0]
    assert list(problem.A[0]) == [Fraction(1, 2), 1]
    assert problem == example1_family().instantiate(2)


def test_parse_problem_errors():
    with raises(SchemaError):
        parse_problem('{"p":["1","1"],"A":[["1","1"],["1"]],"b":["1","1"]}')
    with raises(SchemaError):
        parse_problem('{"p":["1"],"A":[["1"]]}')
    with raises(SchemaError):
        parse_problem('{"p":["1"],"A":[["1"]],"b":["1"]')
    with raises(SchemaError):
        parse_problem('{"p":["1","2"],"A":[["1"]],"b":["1"]}')
    with raises(SchemaError):
        parse_problem('{"p":[1.5],"A":[["1"]],"b":["1"]}')
    with raises(ValueError):
        parse_problem('{"p":["1/0"],"A":[["1"]],"b":["1"]}')
    with raises(ValueError):
        parse_problem('{"p":["x"],"A":[["1"]],"b":["1"]}')


def test_serialize_round_trip():
    canonical = '{"p":["1/2","0"],"A":[["1/2","1"]],"b":["1"]}'
    assert serialize_problem(parse_problem(canonical)) == canonical
    problem = LpProblem(["2/4", 3], [[1, "-6/8"]], [5])
    assert parse_problem(serialize_problem(problem)) == problem
    assert serialize_problem(problem) == \
        '{"p":["1/2","3"],"A":[["1","-3/4"]],"b":["5"]}'


def test_problem_is_immutable():
    problem = LpProblem([1], [[1]], [1])
    with raises(AttributeError):
        problem.p = [2]
    with raises(ValueError):
        problem.p[0] = 2


def test_problem_dimensions():
    with raises(DimensionMismatch):
        LpProblem([1, 2], [[1]], [1])
    with raises(DimensionMismatch):
        LpProblem([1], [[1]], [1, 2])
    with raises(DimensionMismatch):
        LpProblem([], [[]], [1])


def test_feasibility():
    problem = LpProblem([1, 0], [[1, 1]], [1])
    assert problem.is_feasible([Fraction(1, 3), Fraction(2, 3)])
    assert not problem.is_feasible([2, -1])
    assert not problem.is_feasible([1, 1])


def test_instantiate():
    family = example1_family()
    member = instantiate(family, 1)
    assert member == LpProblem([1, 0], [[1, 1]], [1])
    member = family.instantiate(4)
    assert list(member.p) == [Fraction(1, 4), 0]
    assert list(member.A[0]) == [Fraction(1, 4), 1]
    for bad in [0, -1, 1.5, True]:
        with raises(ValueError):
            family.instantiate(bad)


def test_zero_family_is_constant():
    limit = LpProblem([1, 2], [[1, 1]], [3])
    family = ProblemFamily(limit)
    assert family.is_constant
    for N in (1, 7, 100):
        assert family.instantiate(N) == limit


def test_family_residuals():
    family = ProblemFamily(LpProblem([1, 2], [[1, 1], [0, 1]], [3, 1]),
                           delta_p=[1, -2], delta_A=[[0, 3], [1, 1]],
                           delta_b=["1/2", 2])
    for N in (1, 3, 10):
        scale = Fraction(1, N ** 2)
        assert family.residuals(N) == (
            scale * norm_squared(family.delta_p),
            scale * matrix_norm_squared(family.delta_A),
            scale * norm_squared(family.delta_b))


def test_family_json():
    family = example1_family()
    text = serialize_family(family)
    assert parse_family(text) == family
    bare = parse_family('{"limit":{"p":["1"],"A":[["1"]],"b":["1"]}}')
    assert bare.is_constant
    with raises(SchemaError):
        parse_family('{"limit":{"p":["1"],"A":[["1"]],"b":["1"]},'
                     '"delta_b":["1","2"]}')
    with raises(SchemaError):
        parse_family('{"delta_b":["1"]}')


def test_dual_of():
    dual = dual_of(LpProblem([1], [[1]], [1]))
    assert isinstance(dual, DualProblem)
    assert dual.is_feasible([1]) and not dual.is_feasible([0])
    assert dual.value([3]) == 3

    dual = dual_of(example1_family().instantiate(1))
    assert np.array_equal(dual.constraint_matrix, np.array([[1], [1]]))
    assert list(dual.lower_bounds) == [1, 0]
    assert dual.is_feasible([1]) and not dual.is_feasible([Fraction(1, 2)])

    dual = dual_of(example1_family().limit)
    assert list(dual.slacks([5])) == [0, 5]
    assert dual.is_feasible([0]) and not dual.is_feasible([-1])
    with raises(DimensionMismatch):
        dual.slacks([1, 2])


def test_rays():
    problem = LpProblem([2, 1], [[1, 1]], [1])
    rhs = PerturbationRay.from_deltas(delta_b=[1])
    assert isinstance(rhs, RhsRay)
    assert rhs.delta_p is None
    assert rhs.apply(problem, Fraction(1, 2)) == LpProblem([2, 1], [[1, 1]],
                                                           ["3/2"])
    obj = PerturbationRay.from_deltas(delta_p=[0, 1])
    assert isinstance(obj, ObjectiveRay)
    assert obj.delta_b is None
    assert obj.apply(problem, 2) == LpProblem([2, 3], [[1, 1]], [1])
    assert obj.to_dict() == {"delta_p": ["0", "1"]}
    with raises(ValueError):
        PerturbationRay.from_deltas()
    with raises(ValueError):
        PerturbationRay.from_deltas(delta_b=[1], delta_p=[0, 1])
    with raises(DimensionMismatch):
        RhsRay([1, 1]).apply(problem, 1)


def test_parse_vector():
    assert list(parse_vector('["1", "-1/2", 3]')) == [1, Fraction(-1, 2), 3]
    with raises(SchemaError):
        parse_vector('{"delta": 1}')
