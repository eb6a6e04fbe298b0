#   Copyright 2024 The parametric_lp authors
#
#   Licensed under the Apache License, Version 2.0 (the "License");
#   you may not use this file except in compliance with the License.
#   You may obtain a copy of the License at
#
#       http://www.apache.org/licenses/LICENSE-2.0
#
#   Unless required by applicable law or agreed to in writing, software
#   distributed under the License is distributed on an "AS IS" BASIS,
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#   See the License for the specific language governing permissions and
#   limitations under the License.

"""
Utility and convenience functions: bundled problem families with the
hypotheses their limits satisfy, concavity fixtures and seeded random
instance generators.
"""

from collections import namedtuple
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from parametric_lp.lp.linalg import rank, rational_matrix
from parametric_lp.lp.problem import LpProblem, ProblemFamily

### HYPOTHESIS TAGS OF THE BUNDLED FAMILIES ###

# limit is regular: V should be continuous
REGULAR_LIMIT = "regular_limit"
# A and p fixed, b converges to a nondegenerate limit
FIXED_MATRIX_OBJECTIVE = "fixed_matrix_objective"
# limit is singleton-solvable and regular: S should be lsc
SINGLETON_REGULAR_LIMIT = "singleton_regular_limit"
# limit has a bounded feasible set and is strongly regular: S should be lsc
BOUNDED_STRONGLY_REGULAR_LIMIT = "bounded_strongly_regular_limit"

FamilyFixture = namedtuple("FamilyFixture", ["name", "family", "hypotheses"])
ConcavityFixture = namedtuple("ConcavityFixture", ["p", "A", "triples"])


### FAMILIES ###


def example1_family() -> ProblemFamily:
    """The family ``max (1/N) x_1 s.t. (1/N) x_1 + x_2 = 1``.

    Every member has ``V = 1`` attained only at ``(N, 0)``, while the limit
    ``max 0 s.t. x_2 = 1`` has ``V = 0`` and the unbounded optimal set
    ``{(x_1, 1) | x_1 >= 0}``.
    """
    limit = LpProblem([0, 0], [[0, 1]], [1])
    return ProblemFamily(limit, delta_p=[1, 0], delta_A=[[1, 0]],
                         delta_b=[0])


def rhs_shift_family() -> ProblemFamily:
    """``max 2x_1 + x_2 s.t. x_1 + x_2 = 1 + 1/N``: ``V(N) = 2(1 + 1/N)``."""
    limit = LpProblem([2, 1], [[1, 1]], [1])
    return ProblemFamily(limit, delta_b=[1])


def matrix_drift_family() -> ProblemFamily:
    """``max (2 + 1/N) x_1 + x_2 s.t. (1 + 1/N) x_1 + x_2 + x_3 = 2``:
    ``V(N) = 4 - 2/(N + 1)``."""
    limit = LpProblem([2, 1, 0], [[1, 1, 1]], [2])
    return ProblemFamily(limit, delta_p=[1, 0, 0], delta_A=[[1, 0, 0]])


def min_cap_family() -> ProblemFamily:
    """``max x_1 s.t. x_1 + x_2 = 1 + 1/N, x_1 + x_3 = 2`` with fixed
    ``A`` and ``p``: ``V(N) = min(1 + 1/N, 2)``."""
    limit = LpProblem([1, 0, 0], [[1, 1, 0], [1, 0, 1]], [1, 2])
    return ProblemFamily(limit, delta_b=[1, 0])


def bundled_families() -> List[FamilyFixture]:
    """The families shipped for conformance checks, each with the tags of
    the hypotheses its limit satisfies."""
    return [
        FamilyFixture("example1", example1_family(), ()),
        FamilyFixture("rhs_shift", rhs_shift_family(),
                      (REGULAR_LIMIT, FIXED_MATRIX_OBJECTIVE,
                       SINGLETON_REGULAR_LIMIT,
                       BOUNDED_STRONGLY_REGULAR_LIMIT)),
        FamilyFixture("matrix_drift", matrix_drift_family(),
                      (REGULAR_LIMIT, SINGLETON_REGULAR_LIMIT,
                       BOUNDED_STRONGLY_REGULAR_LIMIT)),
        FamilyFixture("min_cap", min_cap_family(),
                      (REGULAR_LIMIT, FIXED_MATRIX_OBJECTIVE,
                       SINGLETON_REGULAR_LIMIT,
                       BOUNDED_STRONGLY_REGULAR_LIMIT)),
    ]


def concavity_fixtures() -> ConcavityFixture:
    """``p = (1, 0, 0)``, ``A = [[1, 1, 0], [1, 0, 1]]``, where
    ``V(b) = min(b_1, b_2)`` for ``b >= 0``. The first triple switches the
    optimal basis between ``b1`` and ``b2`` and is strict; the others are
    equalities."""
    p = [1, 0, 0]
    A = [[1, 1, 0], [1, 0, 1]]
    triples = [([1, 3], [3, 1], Fraction(1, 2)),
               ([1, 2], [1, 2], Fraction(1, 3)),
               ([1, 2], [2, 4], Fraction(1, 2))]
    return ConcavityFixture(p, A, triples)


### RANDOM INSTANCES ###


def random_problem(m: int, n: int, rng: np.random.Generator,
                   low: int = -3, high: int = 3,
                   feasible: bool = True) -> LpProblem:
    """
    Creates a random problem with integer entries drawn uniformly from
    ``[low, high]``.

    Parameters
    ----------
    m, n:
        The numbers of rows and columns.
    rng:
        The seeded generator to draw from.
    low, high:
        The entry range of ``p`` and ``A``.
    feasible:
        If True, ``b = A x0`` for a random integer ``x0 >= 0``, so the
        problem is feasible. Otherwise ``b`` is drawn like the other
        entries.

    Returns
    -------
    LpProblem:
        The random problem.
    """
    A = rng.integers(low, high + 1, size=(m, n))
    p = rng.integers(low, high + 1, size=n)
    if feasible:
        x0 = rng.integers(0, max(high, 1) + 1, size=n)
        b = A @ x0
    else:
        b = rng.integers(low, high + 1, size=m)
    return LpProblem([int(v) for v in p], A.tolist(), [int(v) for v in b])


def random_full_column_rank(r: int, s: int, rng: np.random.Generator,
                            low: int = -4, high: int = 4) -> np.ndarray:
    """
    Draws integer ``r x s`` matrices until one has independent columns.

    Parameters
    ----------
    r, s:
        The shape, ``s <= r``.
    rng:
        The seeded generator to draw from.

    Returns
    -------
    np.ndarray:
        An exact rational matrix of rank ``s``.
    """
    if s > r:
        raise ValueError(f"{s} columns cannot be independent in dimension {r}")
    while True:
        M = rational_matrix(rng.integers(low, high + 1, size=(r, s)).tolist(),
                            n_cols=s)
        if rank(M) == s:
            return M


def random_rhs_direction(m: int, rng: np.random.Generator,
                         low: int = -2, high: int = 2) -> Tuple[int, ...]:
    """A random nonzero integer direction of length ``m``."""
    while True:
        delta = tuple(int(v) for v in rng.integers(low, high + 1, size=m))
        if any(delta):
            return delta
