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
Per-problem predicates: regular, strongly regular, singleton-solvable and
bounded feasible set, each returned with a checkable witness, and
finite-sample boundedness reports for lists of problems.
"""

import warnings
from collections import namedtuple
from typing import Dict, List, Optional, Sequence

import pandas as pd

from parametric_lp.exceptions import (DegenerateBasisWarning, Infeasible,
                                      NotOptimal)
from parametric_lp.lp.linalg import (RationalVector, matvec, norm_squared,
                                     pseudo_inverse, rational_to_str,
                                     rational_vector, submatrix, transpose,
                                     zeros_vector)
from parametric_lp.lp.problem import DualProblem, LpProblem
from parametric_lp.lp.solver import (BasicPoint, SolveOutcome, Status,
                                     face_direction, improving_direction,
                                     solve)

PredicateResult = namedtuple("PredicateResult", ["holds", "witness"])


def _vector(v) -> List[str]:
    return [rational_to_str(q) for q in v]


def _optimal_outcome(problem: LpProblem, outcome: Optional[SolveOutcome],
                     cap) -> SolveOutcome:
    if outcome is None:
        outcome = solve(problem, cap)
    if not outcome.is_optimal:
        raise NotOptimal(f"problem is {outcome.status.value}",
                         status=outcome.status)
    return outcome


def support_dual(problem: LpProblem, bp: BasicPoint) -> RationalVector:
    """``y^T = p_S^T S^-`` over the support columns ``S`` of ``bp``.

    For a support of ``m`` columns this is the dual of the square basis. A
    shorter support uses the pseudo-inverse as it stands and emits a
    ``DegenerateBasisWarning``; the empty support gives ``y = 0``.
    """
    if not bp.support:
        return zeros_vector(problem.m)
    if len(bp.support) < problem.m:
        warnings.warn(f"support {bp.support} has fewer than m={problem.m} "
                      "columns, regularity uses its pseudo-inverse",
                      DegenerateBasisWarning)
    S = submatrix(problem.A, bp.support)
    p_S = rational_vector(problem.p[j] for j in bp.support)
    return matvec(transpose(pseudo_inverse(S)), p_S)


def _blocking_column(problem: LpProblem, bp: BasicPoint, y) -> Optional[int]:
    # first zero coordinate without a strictly positive dual slack
    slacks = DualProblem(problem).slacks(y)
    for j in range(problem.n):
        if bp.x[j] == 0 and slacks[j] <= 0:
            return j
    return None


def _regularity_witness(problem: LpProblem, bp: BasicPoint, y,
                        column: Optional[int]) -> Dict:
    witness = {"x": _vector(bp.x), "y": _vector(y),
               "degenerate": len(bp.support) < problem.m}
    if column is not None:
        witness["column"] = column
    return witness


def is_regular(problem: LpProblem, outcome: SolveOutcome = None,
               cap=None) -> PredicateResult:
    """Is there a basic optimal point whose dual has a strictly positive
    slack ``y^T A^j - p_j`` on every column with ``x_j = 0``?

    A point without zero coordinates passes vacuously.

    Parameters
    ----------
    problem:
        The LP problem.
    outcome:
        ``solve(problem)`` if already available.
    cap:
        Enumeration cap for solving.

    Returns
    -------
    PredicateResult
        The witness is the first passing point with its dual, or else the
        first basic optimal point with its dual and a blocking ``column``.

    Raises
    ------
    NotOptimal
        If the problem is infeasible or unbounded.
    """
    outcome = _optimal_outcome(problem, outcome, cap)
    counter = None
    for bp in outcome.optimal_basics:
        y = support_dual(problem, bp)
        column = _blocking_column(problem, bp, y)
        if column is None:
            return PredicateResult(True, _regularity_witness(problem, bp, y,
                                                             None))
        if counter is None:
            counter = _regularity_witness(problem, bp, y, column)
    return PredicateResult(False, counter)


def is_strongly_regular(problem: LpProblem, outcome: SolveOutcome = None,
                        cap=None) -> PredicateResult:
    """Does the strict slack condition of ``is_regular`` hold at every basic
    optimal point?

    Returns
    -------
    PredicateResult
        The witness lists all basic optimal points, or names the first
        failing point, its dual and the blocking column.

    Raises
    ------
    NotOptimal
        If the problem is infeasible or unbounded.
    """
    outcome = _optimal_outcome(problem, outcome, cap)
    for bp in outcome.optimal_basics:
        y = support_dual(problem, bp)
        column = _blocking_column(problem, bp, y)
        if column is not None:
            return PredicateResult(False, _regularity_witness(problem, bp, y,
                                                              column))
    return PredicateResult(True, {"points": [_vector(bp.x) for bp in
                                             outcome.optimal_basics]})


def is_singleton_solvable(problem: LpProblem, outcome: SolveOutcome = None,
                          cap=None) -> PredicateResult:
    """Is the optimal set a single point?

    True iff there is exactly one basic optimal point and the optimal face
    has no recession direction: a bounded face is the convex hull of its
    basic optimal points.

    Returns
    -------
    PredicateResult
        The unique point, or a second basic optimal point, or a recession
        direction ``d`` of the optimal face.

    Raises
    ------
    NotOptimal
        If the problem is infeasible or unbounded.
    """
    outcome = _optimal_outcome(problem, outcome, cap)
    first = outcome.optimal_basics[0]
    if len(outcome.optimal_basics) > 1:
        return PredicateResult(False, {
            "x": _vector(first.x),
            "other": _vector(outcome.optimal_basics[1].x)})
    d = face_direction(problem, cap)
    if d is not None:
        return PredicateResult(False, {"x": _vector(first.x),
                                       "direction": _vector(d)})
    return PredicateResult(True, {"x": _vector(first.x)})


def is_bounded_feasible(problem: LpProblem, outcome: SolveOutcome = None,
                        cap=None) -> PredicateResult:
    """Is the feasible set bounded, i.e. ``recession_extent(ones) = 0``?

    Returns
    -------
    PredicateResult
        A nonzero recession direction when unbounded.

    Raises
    ------
    Infeasible
        If the problem has no feasible point.
    """
    if outcome is None:
        outcome = solve(problem, cap)
    if outcome.status is Status.INFEASIBLE:
        raise Infeasible("the feasible set is empty")
    d = improving_direction(problem, [1] * problem.n, cap)
    if d is not None:
        return PredicateResult(False, {"direction": _vector(d)})
    return PredicateResult(True, {"extent": "0"})


class Classification():
    """All predicates of one problem with their witnesses.

    Problems that are not optimal have every optimality predicate false with
    the witness ``{"reason": status}``; infeasible problems also have
    ``bounded_feasible`` false.
    """

    def __init__(self, status: Status, bounded_feasible: bool, regular: bool,
                 strongly_regular: bool, singleton_solvable: bool,
                 witnesses: Dict):
        self.status = status
        self.feasible = status is not Status.INFEASIBLE
        self.bounded_feasible = bounded_feasible
        self.regular = regular
        self.strongly_regular = strongly_regular
        self.singleton_solvable = singleton_solvable
        self.witnesses = witnesses

    def to_dict(self) -> Dict:
        return {"status": self.status.value,
                "feasible": self.feasible,
                "bounded_feasible": self.bounded_feasible,
                "regular": self.regular,
                "strongly_regular": self.strongly_regular,
                "singleton_solvable": self.singleton_solvable,
                "witnesses": self.witnesses}

    def __repr__(self):
        flags = [name for name in ("bounded_feasible", "regular",
                                   "strongly_regular", "singleton_solvable")
                 if getattr(self, name)]
        return f"Classification({self.status.value}: {', '.join(flags)})"


def classify(problem: LpProblem, cap=None) -> Classification:
    """Solve ``problem`` once and evaluate every predicate on it."""
    outcome = solve(problem, cap)
    witnesses = {}
    if outcome.status is Status.INFEASIBLE:
        bounded = False
        witnesses["bounded_feasible"] = {"reason": outcome.status.value}
    else:
        bounded, witnesses["bounded_feasible"] = is_bounded_feasible(
            problem, outcome, cap)
    if not outcome.is_optimal:
        reason = {"reason": outcome.status.value}
        for name in ("regular", "strongly_regular", "singleton_solvable"):
            witnesses[name] = reason
        return Classification(outcome.status, bounded, False, False, False,
                              witnesses)
    regular, witnesses["regular"] = is_regular(problem, outcome)
    strong, witnesses["strongly_regular"] = is_strongly_regular(problem,
                                                                outcome)
    singleton, witnesses["singleton_solvable"] = is_singleton_solvable(
        problem, outcome, cap)
    return Classification(outcome.status, bounded, regular, strong, singleton,
                          witnesses)


BoundednessRow = namedtuple("BoundednessRow",
                            ["index", "x", "y", "x_norm_squared",
                             "xy_norm_squared"])


class BoundednessReport():
    """Minimum-norm basic optimal selections of a finite sample of problems.

    ``sup_x_norm_squared`` and ``sup_xy_norm_squared`` are the largest
    ``||x||^2`` and ``||(x, y)||^2`` over the sample, zero for an empty
    sample. They witness a primal (and primal-dual) bound on the sample
    only.
    """

    def __init__(self, rows: List[BoundednessRow]):
        self.rows = rows
        self.sup_x_norm_squared = max((row.x_norm_squared for row in rows),
                                      default=0)
        self.sup_xy_norm_squared = max((row.xy_norm_squared for row in rows),
                                       default=0)

    def to_dict(self) -> Dict:
        return {"count": len(self.rows),
                "sup_x_norm_squared": rational_to_str(self.sup_x_norm_squared),
                "sup_xy_norm_squared":
                    rational_to_str(self.sup_xy_norm_squared),
                "rows": [{"index": row.index,
                          "x": _vector(row.x),
                          "y": _vector(row.y),
                          "x_norm_squared": rational_to_str(row.x_norm_squared),
                          "xy_norm_squared":
                              rational_to_str(row.xy_norm_squared)}
                         for row in self.rows]}

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.to_dict()["rows"],
                            columns=list(BoundednessRow._fields))


def boundedness_witness(problems: Sequence[LpProblem],
                        cap=None) -> BoundednessReport:
    """For every problem pick the basic optimal point of minimum ``||x||^2``
    (first by support on ties) with its dual, and report the sample sups.

    Raises
    ------
    NotOptimal
        Naming the index of the first problem that is not optimal.
    """
    rows = []
    for index, problem in enumerate(problems):
        outcome = solve(problem, cap)
        if not outcome.is_optimal:
            raise NotOptimal(f"problem {index} is {outcome.status.value}",
                             index=index, status=outcome.status)
        bp = min(outcome.optimal_basics, key=lambda bp: norm_squared(bp.x))
        x_norm = norm_squared(bp.x)
        rows.append(BoundednessRow(index, bp.x, bp.y, x_norm,
                                   x_norm + norm_squared(bp.y)))
    return BoundednessReport(rows)
