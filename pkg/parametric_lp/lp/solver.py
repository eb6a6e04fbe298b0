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
Exact solver for small standard form LPs by enumeration of basic feasible
points.

Infeasibility is decided by an empty set of basic feasible points and
unboundedness by the slice ``Ad = 0, 1^T d = 1, d >= 0`` of the recession
cone, itself solved by enumeration. Every basic optimal point is returned
with a KKT-certified dual.
"""

import os
import warnings
from collections import namedtuple
from enum import Enum
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from parametric_lp.exceptions import (CapExceeded, DegenerateBasisWarning,
                                      DimensionMismatch, NotOptimal,
                                      ParametricLPError, SingularBasis)
from parametric_lp.lp.linalg import (RationalMatrix, RationalVector,
                                     SpanEchelon, columns_independent, dot,
                                     invert, matvec, pseudo_inverse, rank,
                                     rational_to_str,
                                     rational_vector, submatrix, transpose,
                                     zeros_vector)
from parametric_lp.lp.problem import DualProblem, LpProblem

DEFAULT_MAX_COLUMNS = 20
DEFAULT_MAX_ROWS = 12
ENUM_CAP_VARIABLE = "PARLP_ENUM_CAP"

EnumerationCap = namedtuple("EnumerationCap", ["max_columns", "max_rows"])
LogEntry = namedtuple("LogEntry", ["support", "value"])


def enumeration_cap(cap: Union[int, EnumerationCap] = None) -> EnumerationCap:
    """Resolve the effective enumeration cap.

    Parameters
    ----------
    cap:
        An explicit cap: an ``EnumerationCap`` or an integer column cap. If
        ``None``, the environment variable ``PARLP_ENUM_CAP`` is used when
        set, and ``(DEFAULT_MAX_COLUMNS, DEFAULT_MAX_ROWS)`` otherwise.

    Raises
    ------
    ValueError
        If the cap is not a positive integer.
    """
    if isinstance(cap, EnumerationCap):
        return cap
    if cap is None:
        text = os.environ.get(ENUM_CAP_VARIABLE)
        if text is None or not text.strip():
            return EnumerationCap(DEFAULT_MAX_COLUMNS, DEFAULT_MAX_ROWS)
        try:
            cap = int(text)
        except ValueError:
            raise ValueError(f"{ENUM_CAP_VARIABLE} must be a positive integer, "
                             f"got {text!r}")
    if isinstance(cap, bool) or not isinstance(cap, (int, np.integer)) \
            or cap < 1:
        raise ValueError(f"enumeration cap must be a positive integer, "
                         f"got {cap!r}")
    return EnumerationCap(int(cap), DEFAULT_MAX_ROWS)


def _check_cap(problem: LpProblem, cap) -> None:
    cap = enumeration_cap(cap)
    if problem.n > cap.max_columns or problem.m > cap.max_rows:
        raise CapExceeded(f"problem of size m={problem.m}, n={problem.n} "
                          f"exceeds the enumeration cap of "
                          f"{cap.max_columns} columns and {cap.max_rows} rows")


class BasicPoint():
    """A basic feasible point with its support, basis and optional dual.

    Parameters
    ----------
    x:
        The point, of length ``n``.
    support:
        The sorted column indices ``j`` with ``x_j > 0``.
    basis:
        A maximal independent set of columns containing the support. It is
        square unless ``rank(A) < m``.
    y:
        A dual vector of length ``m`` certifying optimality, or ``None``.
    rectangular:
        True if ``basis`` has fewer than ``m`` columns.
    """

    def __init__(self, x, support: Sequence[int], basis: Sequence[int],
                 y=None, rectangular: bool = False):
        self.x = rational_vector(x)
        self.support = tuple(support)
        self.basis = tuple(basis)
        self.y = None if y is None else rational_vector(y)
        self.rectangular = rectangular

    def with_dual(self, y, basis: Sequence[int],
                  rectangular: bool) -> "BasicPoint":
        return BasicPoint(self.x, self.support, basis, y, rectangular)

    def to_dict(self) -> Dict:
        out = {"x": [rational_to_str(v) for v in self.x],
               "support": list(self.support),
               "basis": list(self.basis)}
        if self.y is not None:
            out["y"] = [rational_to_str(v) for v in self.y]
        out["degenerate"] = self.rectangular
        return out

    def __eq__(self, other):
        if not isinstance(other, BasicPoint):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self):
        return (f"BasicPoint(x={[rational_to_str(v) for v in self.x]}, "
                f"support={self.support}, basis={self.basis}"
                + ("" if self.y is None else
                   f", y={[rational_to_str(v) for v in self.y]}") + ")")


class Status(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class SolveOutcome():
    """Result of ``solve``.

    Parameters
    ----------
    status:
        Optimal, infeasible or unbounded.
    value:
        The optimal value ``V``, only for optimal problems.
    optimal_basics:
        The basic optimal points ``S*``, each with a dual, sorted by support.
    all_basics:
        The basic feasible points ``X*``, sorted by support.
    log:
        ``LogEntry(support, value)`` per enumerated point if logging was
        enabled.
    """

    def __init__(self, status: Status, value: Fraction = None,
                 optimal_basics: Sequence[BasicPoint] = (),
                 all_basics: Sequence[BasicPoint] = (), log: List = None):
        self.status = status
        self.value = value
        self.optimal_basics = list(optimal_basics)
        self.all_basics = list(all_basics)
        self.log = log

    @property
    def is_optimal(self) -> bool:
        return self.status is Status.OPTIMAL

    @property
    def representative(self) -> BasicPoint:
        """The basic optimal point with the lexicographically smallest
        support."""
        if not self.is_optimal:
            raise NotOptimal(f"problem is {self.status.value}",
                             status=self.status)
        return self.optimal_basics[0]

    def to_dict(self) -> Dict:
        out = {"status": self.status.value}
        if self.is_optimal:
            out["value"] = rational_to_str(self.value)
            out["optimal_basics"] = [bp.to_dict() for bp in self.optimal_basics]
        out["basic_count"] = len(self.all_basics)
        return out

    def __repr__(self):
        string = f"SolveOutcome({self.status.value}"
        if self.is_optimal:
            string += f", V={rational_to_str(self.value)}"
        return string + f", {len(self.all_basics)} basic points)"


def greedy_basis(A: RationalMatrix, support: Sequence[int]) -> Tuple[int, ...]:
    """Extend ``support`` to a maximal independent column set, adding the
    lowest column indices first."""
    echelon = SpanEchelon(A.shape[0])
    for j in support:
        echelon = echelon.extend(A[:, j])
        if echelon is None:
            raise SingularBasis(f"support {tuple(support)} has dependent "
                                "columns")
    chosen = set(support)
    for j in range(A.shape[1]):
        if j in chosen or len(echelon) == A.shape[0]:
            continue
        extended = echelon.extend(A[:, j])
        if extended is not None:
            echelon = extended
            chosen.add(j)
    return tuple(sorted(chosen))


def basis_extensions(A: RationalMatrix,
                     support: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """All maximal independent column sets containing ``support``, in
    lexicographic order. The first one is ``greedy_basis(A, support)``.

    Raises
    ------
    SingularBasis
        If the support columns are dependent.
    """
    support = tuple(sorted(support))
    if not columns_independent(A, support):
        raise SingularBasis(f"support {support} has dependent columns")
    r = rank(A)
    rest = [j for j in range(A.shape[1]) if j not in support]
    for extra in combinations(rest, r - len(support)):
        basis = tuple(sorted(support + extra))
        if columns_independent(A, basis):
            yield basis


def _point_on_support(problem: LpProblem,
                      support: Tuple[int, ...]) -> Optional[RationalVector]:
    # b lies in the span of the support columns here
    x = [Fraction(0)] * problem.n
    if not support:
        return rational_vector(x)
    B = submatrix(problem.A, support)
    x_B = matvec(pseudo_inverse(B), problem.b)
    if not np.array_equal(matvec(B, x_B), problem.b):
        return None
    if any(v <= 0 for v in x_B):
        return None
    for j, v in zip(support, x_B):
        x[j] = v
    return rational_vector(x)


def _enumerate(problem: LpProblem) -> List[BasicPoint]:
    A, b, m, n = problem.A, problem.b, problem.m, problem.n
    columns = [A[:, j] for j in range(n)]
    # a row with b_i != 0 needs a support column nonzero in that row, so a
    # branch is dead once it passes the last such column of an uncovered row
    last = {i: max((j for j in range(n) if A[i, j] != 0), default=-1)
            for i in range(m) if b[i] != 0}
    if any(j < 0 for j in last.values()):
        return []
    points = []

    def visit(support, echelon, start, uncovered):
        if not uncovered and echelon.contains(b):
            x = _point_on_support(problem, support)
            if x is not None:
                points.append(BasicPoint(x, support,
                                         greedy_basis(A, support)))
        if len(support) == m:
            return
        deadline = min((last[i] for i in uncovered), default=n - 1)
        for j in range(start, deadline + 1):
            extended = echelon.extend(columns[j])
            if extended is not None:
                visit(support + (j,), extended, j + 1,
                      frozenset(i for i in uncovered if A[i, j] == 0))

    visit((), SpanEchelon(m), 0, frozenset(last))
    points.sort(key=lambda bp: bp.support)
    return points


def enumerate_basic_feasible(problem: LpProblem,
                             cap: Union[int, EnumerationCap] = None
                             ) -> List[BasicPoint]:
    """The basic feasible points ``X*`` of ``problem``, sorted by support.

    Column subsets are grown in increasing index order and abandoned as soon
    as they become dependent. For every independent subset ``J`` whose span
    contains ``b``, the point ``x_J = B^- b`` is accepted iff ``B x_J = b``
    and ``x_J > 0``. The support of a basic point determines it, so the
    result has no duplicates.

    Parameters
    ----------
    problem:
        The LP problem.
    cap:
        Enumeration cap, see ``enumeration_cap``.

    Returns
    -------
    List[BasicPoint]
        The points, without duals.

    Raises
    ------
    CapExceeded
        If the problem is larger than the cap.
    """
    _check_cap(problem, cap)
    return _enumerate(problem)


def _box_problem(A: RationalMatrix, objective: Sequence,
                 face: Sequence = None) -> LpProblem:
    # variables (d, s) with d + s = 1, plus a slack t = face^T d >= 0
    m, n = A.shape
    extra = 0 if face is None else 1
    rows, rhs = [], []
    for i in range(m):
        rows.append(list(A[i, :]) + [0] * (n + extra))
        rhs.append(0)
    if face is not None:
        rows.append(list(face) + [0] * n + [-1])
        rhs.append(0)
    for i in range(n):
        rows.append([int(i == j) for j in range(n)] * 2 + [0] * extra)
        rhs.append(1)
    return LpProblem(list(objective) + [0] * (n + extra), rows, rhs)


def _cone_problem(A: RationalMatrix, objective: Sequence,
                  face: Sequence = None) -> LpProblem:
    # Ad = 0, 1^T d = 1, d >= 0, plus a slack t = face^T d >= 0
    m, n = A.shape
    extra = 0 if face is None else 1
    rows = [list(A[i, :]) + [0] * extra for i in range(m)]
    if face is not None:
        rows.append(list(face) + [-1])
    rows.append([1] * n + [0] * extra)
    rhs = [0] * (len(rows) - 1) + [1]
    return LpProblem(list(objective) + [0] * extra, rows, rhs)


def _maximum(problem: LpProblem,
             n: int) -> Optional[Tuple[Fraction, RationalVector]]:
    # first maximizer in support order, None without basic feasible points
    best_value, best_x = None, None
    for bp in _enumerate(problem):
        value = problem.objective(bp.x)
        if best_value is None or value > best_value:
            best_value, best_x = value, bp.x
    if best_x is None:
        return None
    return best_value, rational_vector(best_x[:n])


def _primitive(d: RationalVector) -> RationalVector:
    # smallest positive multiple of d with integer entries
    scale = reduce(lambda a, b: a * b // gcd(a, b),
                   (v.denominator for v in d), 1)
    integers = [int(v * scale) for v in d]
    divisor = reduce(gcd, integers, 0) or 1
    return rational_vector(Fraction(v, divisor) for v in integers)


def _checked_objective(problem: LpProblem, objective: Sequence):
    if len(objective) != problem.n:
        raise DimensionMismatch(f"objective has length {len(objective)}, "
                                f"expected {problem.n}")


def improving_direction(problem: LpProblem, objective: Sequence,
                        cap: Union[int, EnumerationCap] = None
                        ) -> Optional[RationalVector]:
    """A recession direction ``d`` of the feasible set with
    ``objective^T d > 0``, or ``None`` if there is none.

    Decided on the slice ``Ad = 0, 1^T d = 1, d >= 0`` of the recession
    cone. The slice is a polytope with one more row than ``A`` and the same
    columns, so this costs about as much as ``enumerate_basic_feasible``.

    Returns
    -------
    Optional[RationalVector]
        The best direction on the slice, scaled to coprime integers.
    """
    _check_cap(problem, cap)
    _checked_objective(problem, objective)
    best = _maximum(_cone_problem(problem.A, objective), problem.n)
    if best is None or best[0] <= 0:
        return None
    return _primitive(best[1])


def face_direction(problem: LpProblem,
                   cap: Union[int, EnumerationCap] = None
                   ) -> Optional[RationalVector]:
    """A nonzero recession direction ``d`` with ``p^T d >= 0``, or ``None``.

    For an optimal problem such a ``d`` has ``p^T d = 0``, and the optimal
    face is unbounded along it.
    """
    _check_cap(problem, cap)
    best = _maximum(_cone_problem(problem.A, [0] * problem.n,
                                  face=problem.p), problem.n)
    return None if best is None else _primitive(best[1])


def recession_direction(problem: LpProblem, objective: Sequence,
                        cap: Union[int, EnumerationCap] = None
                        ) -> Tuple[Fraction, RationalVector]:
    """Maximize ``objective^T d`` subject to ``Ad = 0, 0 <= d <= 1``.

    The box problem is only enumerated when ``improving_direction`` finds
    a direction; otherwise the extent is zero at ``d = 0``.

    Returns
    -------
    Tuple[Fraction, RationalVector]
        The optimal value (the recession extent) and a maximizing ``d``.
    """
    if improving_direction(problem, objective, cap) is None:
        return Fraction(0), zeros_vector(problem.n)
    return _maximum(_box_problem(problem.A, objective), problem.n)


def recession_extent(problem: LpProblem, objective: Sequence,
                     cap: Union[int, EnumerationCap] = None) -> Fraction:
    """Optimal value of ``max objective^T d s.t. Ad = 0, 0 <= d <= 1``.

    Zero iff no recession direction of the feasible set improves
    ``objective``.
    """
    return recession_direction(problem, objective, cap)[0]


def face_recession_direction(problem: LpProblem,
                             cap: Union[int, EnumerationCap] = None
                             ) -> Tuple[Fraction, RationalVector]:
    """Maximize ``sum(d)`` subject to ``Ad = 0, p^T d >= 0, 0 <= d <= 1``.

    For an optimal problem every recession direction has ``p^T d <= 0``, so
    a positive extent means the optimal face is unbounded along ``d``.
    """
    if face_direction(problem, cap) is None:
        return Fraction(0), zeros_vector(problem.n)
    ones = [1] * problem.n
    return _maximum(_box_problem(problem.A, ones, face=problem.p), problem.n)


def dual_from_basis(problem: LpProblem, bp: BasicPoint) -> RationalVector:
    """The dual ``y^T = p_B^T B^{-1}`` over the basis columns of ``bp``.

    For a rectangular basis (``rank(A) < m``) the pseudo-inverse ``B^-``
    replaces ``B^{-1}`` and a ``DegenerateBasisWarning`` is emitted.

    Raises
    ------
    SingularBasis
        If the basis columns are dependent or more than ``m``.
    """
    basis = bp.basis
    if len(basis) > problem.m or not columns_independent(problem.A, basis):
        raise SingularBasis(f"basis {basis} is not an independent column set")
    B = submatrix(problem.A, basis)
    p_B = rational_vector(problem.p[j] for j in basis)
    if len(basis) == problem.m:
        return matvec(transpose(invert(B)), p_B)
    warnings.warn(f"basis {basis} has {len(basis)} < m={problem.m} columns, "
                  "using the pseudo-inverse for the dual",
                  DegenerateBasisWarning)
    return matvec(transpose(pseudo_inverse(B)), p_B)


def verify_kkt(problem: LpProblem, x: Sequence, y: Sequence) -> bool:
    """True iff ``Ax = b``, ``x >= 0``, ``y^T A >= p^T`` and
    ``(y^T A - p^T) x = 0`` hold exactly.

    Raises
    ------
    DimensionMismatch
        If ``x`` or ``y`` has the wrong length.
    """
    if len(x) != problem.n or len(y) != problem.m:
        raise DimensionMismatch(f"expected x of length {problem.n} and y of "
                                f"length {problem.m}, got {len(x)} and "
                                f"{len(y)}")
    if not problem.is_feasible(x):
        return False
    slacks = DualProblem(problem).slacks(y)
    if any(s < 0 for s in slacks):
        return False
    return dot(slacks, x) == 0


def dual_feasible(problem: LpProblem, y: Sequence) -> bool:
    """``y^T A >= p^T``"""
    return DualProblem(problem).is_feasible(y)


def certify(problem: LpProblem, bp: BasicPoint) -> Optional[BasicPoint]:
    """Find a basis extension of ``bp`` whose dual certifies optimality.

    Extensions are tried in lexicographic order, so the greedy extension
    wins whenever it certifies. An optimal basic point always has a
    certifying extension.

    Returns
    -------
    Optional[BasicPoint]
        ``bp`` with the certifying basis and dual, or ``None`` if ``bp`` is
        not optimal.
    """
    rectangular = rank(problem.A) < problem.m
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateBasisWarning)
        for basis in basis_extensions(problem.A, bp.support):
            candidate = bp.with_dual(None, basis, rectangular)
            y = dual_from_basis(problem, candidate)
            if verify_kkt(problem, bp.x, y):
                break
        else:
            return None
    if rectangular:
        warnings.warn(f"rank(A) < m={problem.m}: the dual of support "
                      f"{bp.support} comes from a pseudo-inverse",
                      DegenerateBasisWarning)
    return bp.with_dual(y, basis, rectangular)


def solve(problem: LpProblem, cap: Union[int, EnumerationCap] = None,
          enable_logging: bool = False) -> SolveOutcome:
    """Solve ``max p^T x s.t. Ax = b, x >= 0`` exactly.

    Parameters
    ----------
    problem:
        The LP problem.
    cap:
        Enumeration cap, see ``enumeration_cap``.
    enable_logging:
        Keep a ``LogEntry(support, value)`` per basic feasible point in
        ``SolveOutcome.log``.

    Returns
    -------
    SolveOutcome
        Infeasible iff there are no basic feasible points, unbounded iff some
        recession direction ``d`` has ``p^T d > 0``, optimal otherwise, with
        every basic optimal point carrying a KKT-certified dual.

    Raises
    ------
    CapExceeded
        If the problem is larger than the cap.
    """
    basics = enumerate_basic_feasible(problem, cap)
    log = None
    if enable_logging:
        log = [LogEntry(support=bp.support, value=problem.objective(bp.x))
               for bp in basics]
    if not basics:
        return SolveOutcome(Status.INFEASIBLE, log=log)
    if improving_direction(problem, problem.p, cap) is not None:
        return SolveOutcome(Status.UNBOUNDED, all_basics=basics, log=log)

    values = [problem.objective(bp.x) for bp in basics]
    value = max(values)
    optimal = []
    for bp, v in zip(basics, values):
        if v != value:
            continue
        certified = certify(problem, bp)
        if certified is None:
            raise ParametricLPError(f"optimal basic point with support "
                                    f"{bp.support} has no certifying dual")
        optimal.append(certified)
    return SolveOutcome(Status.OPTIMAL, value, optimal, basics, log)


def solve_optimal(problem: LpProblem, cap=None, index=None) -> SolveOutcome:
    """``solve`` that raises ``NotOptimal`` (carrying ``index``) unless the
    problem is optimal."""
    outcome = solve(problem, cap)
    if not outcome.is_optimal:
        raise NotOptimal(f"problem{'' if index is None else f' {index}'} is "
                         f"{outcome.status.value}", index=index,
                         status=outcome.status)
    return outcome


def optimal_value(problem: LpProblem, cap=None, index=None) -> Fraction:
    """``V(problem)``, raising ``NotOptimal`` like ``solve_optimal``."""
    return solve_optimal(problem, cap, index).value
