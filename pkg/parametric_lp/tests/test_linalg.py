"""
Tests for the exact linear algebra in parametric_lp.lp.linalg
"""

import os
import sys
myPath = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, myPath + '/../../')

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from pytest import raises

from parametric_lp.exceptions import (DependentColumns, DimensionMismatch,
                                      SingularMatrix)
from parametric_lp.lp.linalg import (SpanEchelon, as_rational,
                                     columns_independent, identity,
                                     inverse_gap_squared, invert, matmul,
                                     matrix_norm_squared, norm_squared,
                                     pseudo_inverse, rank, rational_matrix,
                                     rational_to_str, rational_vector,
                                     transpose)
from parametric_lp.utilities import random_full_column_rank


def echelon_rank(rows):
    """Rank by plain Gaussian elimination on Fractions with row swaps,
    written independently of ``rank``."""
    rows = [[Fraction(v) for v in row] for row in rows]
    rank_, n_cols = 0, len(rows[0]) if rows else 0
    for c in range(n_cols):
        pivot = None
        for i in range(rank_, len(rows)):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank_], rows[pivot] = rows[pivot], rows[rank_]
        for i in range(rank_ + 1, len(rows)):
            factor = rows[i][c] / rows[rank_][c]
            rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank_])]
        rank_ += 1
    return rank_


small_ints = st.integers(min_value=-5, max_value=5)


@st.composite
def integer_matrices(draw, max_rows=4, max_cols=4):
    m = draw(st.integers(min_value=1, max_value=max_rows))
    n = draw(st.integers(min_value=1, max_value=max_cols))
    rows = draw(st.lists(st.lists(small_ints, min_size=n, max_size=n),
                         min_size=m, max_size=m))
    return rational_matrix(rows)


@st.composite
def square_matrices(draw, max_size=4):
    n = draw(st.integers(min_value=1, max_value=max_size))
    rows = draw(st.lists(st.lists(small_ints, min_size=n, max_size=n),
                         min_size=n, max_size=n))
    return rational_matrix(rows)


def test_as_rational():
    assert as_rational("-3/4") == Fraction(-3, 4)
    assert as_rational("6/8") == Fraction(3, 4)
    assert as_rational("5") == 5
    assert as_rational(7) == 7
    assert as_rational(np.int64(2)) == 2
    for bad in ["1.5", "1/0", "a", "1/-2", "", 0.5, True, None]:
        with raises(ValueError):
            as_rational(bad)


def test_rational_to_str():
    assert rational_to_str(Fraction(-6, 8)) == "-3/4"
    assert rational_to_str(Fraction(5)) == "5"
    assert rational_to_str(0) == "0"


def test_constructors_are_read_only():
    v = rational_vector([1, "1/2"])
    M = rational_matrix([[1, 2], [3, 4]])
    with raises(ValueError):
        v[0] = 3
    with raises(ValueError):
        M[0, 0] = 3
    with raises(DimensionMismatch):
        rational_matrix([[1, 2], [3]])


def test_rank():
    assert rank(identity(2)) == 2
    assert rank(rational_matrix([[1, 2], [2, 4]])) == 1
    assert rank(rational_matrix([[0, 0], [0, 0]])) == 0
    assert rank(rational_matrix([["1/2", "1/3"], ["1/4", "1/6"]])) == 1


def test_rank_random_against_echelon_oracle():
    rng = np.random.default_rng(1)
    for _ in range(50):
        rows = rng.integers(-3, 4, size=(3, 4)).tolist()
        assert rank(rational_matrix(rows)) == echelon_rank(rows)


def test_columns_independent():
    assert columns_independent(rational_matrix([[0, 1]]), [])
    assert not columns_independent(rational_matrix([[0, 1]]), [0])
    assert columns_independent(rational_matrix([[0, 1]]), [1])
    assert not columns_independent(rational_matrix([[1, 1]]), [0, 1])


def test_invert():
    assert np.array_equal(invert(identity(3)), identity(3))
    assert np.array_equal(invert(rational_matrix([[2, 0], [0, 4]])),
                          rational_matrix([["1/2", 0], [0, "1/4"]]))
    assert np.array_equal(invert(rational_matrix([[1, 1], [1, 2]])),
                          rational_matrix([[2, -1], [-1, 1]]))
    with raises(SingularMatrix):
        invert(rational_matrix([[1, 2], [2, 4]]))
    with raises(SingularMatrix):
        invert(rational_matrix([[1, 2]]))


def test_pseudo_inverse():
    assert np.array_equal(pseudo_inverse(identity(2)), identity(2))
    assert np.array_equal(pseudo_inverse(rational_matrix([[1], [1]])),
                          rational_matrix([["1/2", "1/2"]]))
    B = rational_matrix([[1, 1], [1, 2]])
    assert np.array_equal(pseudo_inverse(B), invert(B))
    with raises(DependentColumns):
        pseudo_inverse(rational_matrix([[1, 2], [1, 2], [0, 0]]))


def test_norms():
    assert norm_squared([0, 0, 0]) == 0
    assert norm_squared([3, 4]) == 25
    assert norm_squared([Fraction(1, 2), Fraction(1, 3)]) == Fraction(13, 36)
    M = rational_matrix([[1, 2], [3, 4]])
    assert matrix_norm_squared(M) == 30
    assert matrix_norm_squared(M) == sum(norm_squared(M[:, j])
                                         for j in range(2))


def test_span_echelon():
    echelon = SpanEchelon(2)
    echelon = echelon.extend([1, 1])
    assert len(echelon) == 1
    assert echelon.contains([2, 2])
    assert not echelon.contains([1, 0])
    assert echelon.extend([3, 3]) is None
    full = echelon.extend([0, 1])
    assert full.contains([5, -7])
    assert len(echelon) == 1


def test_inverse_gap_decays_quadratically():
    B = rational_matrix([[1, 1], [1, 2]])
    delta_B = rational_matrix([[1, 0], [0, 1]])
    gaps = {N: inverse_gap_squared(B, delta_B, N) for N in (16, 256, 4096)}
    C = 2 * gaps[16] * 16 ** 2
    for N, gap in gaps.items():
        assert 0 < gap <= C / N ** 2


@settings(max_examples=60, deadline=None)
@given(M=integer_matrices())
def test_rank_of_transpose(M):
    assert rank(M) == rank(transpose(M))
    assert np.array_equal(transpose(transpose(M)), M)


@settings(max_examples=60, deadline=None)
@given(B=square_matrices())
def test_inverse_is_two_sided(B):
    assume(rank(B) == B.shape[0])
    B_inv = invert(B)
    I = identity(B.shape[0])
    assert np.array_equal(matmul(B_inv, B), I)
    assert np.array_equal(matmul(B, B_inv), I)


def test_pseudo_inverse_law():
    rng = np.random.default_rng(7)
    for _ in range(20):
        s = int(rng.integers(1, 5))
        r = int(rng.integers(s, 7))
        B = random_full_column_rank(r, s, rng)
        assert np.array_equal(matmul(pseudo_inverse(B), B), identity(s))


@pytest.mark.slow
def test_pseudo_inverse_law_corpus():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        s = int(rng.integers(1, 5))
        r = int(rng.integers(s, 7))
        B = random_full_column_rank(r, s, rng)
        B_pinv = pseudo_inverse(B)
        assert np.array_equal(matmul(B_pinv, B), identity(s))
        if r == s:
            assert np.array_equal(B_pinv, invert(B))
