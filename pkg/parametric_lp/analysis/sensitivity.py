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
Ranging of a fixed optimal basis under right-hand side perturbations
``b + theta delta_b`` and objective perturbations ``p + theta delta_p``.

Inside the returned interval the basis stays optimal and the optimal value
is exactly ``base_value + theta * slope``. The intervals only depend on the
problem and the basis, not on any set of problems the perturbed problems
might belong to.
"""

import math
from collections import namedtuple
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Union

import pandas as pd

from parametric_lp.exceptions import (DimensionMismatch, LinearityViolation,
                                      NotOptimalBasic, RectangularBasis,
                                      ZeroDelta)
from parametric_lp.lp.linalg import (RationalVector, column, dot, invert,
                                     matvec, rational_to_str, rational_vector,
                                     submatrix)
from parametric_lp.lp.problem import (LpProblem, ObjectiveRay,
                                      PerturbationRay, RhsRay)
from parametric_lp.lp.solver import (BasicPoint, dual_from_basis, solve,
                                     solve_optimal, verify_kkt)

ExtendedRational = Union[Fraction, float]

VerificationRow = namedtuple("VerificationRow",
                             ["theta", "inside", "status", "value",
                              "predicted", "matches"])


def extended_to_str(value: ExtendedRational) -> str:
    """``"-inf"``, ``"+inf"`` or the canonical rational string."""
    if value == math.inf:
        return "+inf"
    if value == -math.inf:
        return "-inf"
    return rational_to_str(value)


class ThetaInterval():
    """The closed interval ``[lo, hi]`` around zero on which ``basic_point``'s
    basis stays optimal, together with the slope of the optimal value.

    Parameters
    ----------
    lo, hi:
        The bounds. Unbounded sides are ``-math.inf`` and ``math.inf``.
    slope:
        The constant derivative of the optimal value in ``theta``.
    base_value:
        The optimal value at ``theta = 0``.
    basic_point:
        The basic optimal point whose basis was ranged.
    degenerate:
        True if a ratio numerator vanished (a zero basic coordinate for
        right-hand side ranging, a zero reduced cost for objective ranging),
        in which case ``lo`` or ``hi`` may be zero.
    kind:
        ``"delta_b"`` or ``"delta_p"``, the ray kind the interval is for.
    """

    def __init__(self, lo: ExtendedRational, hi: ExtendedRational,
                 slope: Fraction, base_value: Fraction,
                 basic_point: BasicPoint, degenerate: bool, kind: str):
        self.lo = lo
        self.hi = hi
        self.slope = slope
        self.base_value = base_value
        self.basic_point = basic_point
        self.degenerate = degenerate
        self.kind = kind

    def __contains__(self, theta) -> bool:
        return self.lo <= theta <= self.hi

    def predicted_value(self, theta) -> Fraction:
        return self.base_value + Fraction(theta) * self.slope

    def to_dict(self) -> Dict:
        return {"lo": extended_to_str(self.lo),
                "hi": extended_to_str(self.hi),
                "slope": rational_to_str(self.slope),
                "base_value": rational_to_str(self.base_value),
                "degenerate": self.degenerate}

    def __repr__(self):
        return (f"ThetaInterval([{extended_to_str(self.lo)}, "
                f"{extended_to_str(self.hi)}], "
                f"slope={rational_to_str(self.slope)})")


def _basis_inverse(problem: LpProblem, bp: BasicPoint):
    if len(bp.basis) < problem.m:
        raise RectangularBasis(f"basis {bp.basis} has fewer than m="
                               f"{problem.m} columns; ranging needs a square "
                               "basis")
    y = dual_from_basis(problem, bp)
    if not verify_kkt(problem, bp.x, y):
        raise NotOptimalBasic(f"basis {bp.basis} does not certify x="
                              f"{[rational_to_str(v) for v in bp.x]} as "
                              "optimal")
    return invert(submatrix(problem.A, bp.basis))


def _checked_delta(delta: Sequence, size: int, name: str) -> RationalVector:
    delta = rational_vector(delta)
    if len(delta) != size:
        raise DimensionMismatch(f"{name} has length {len(delta)}, expected "
                                f"{size}")
    if not any(delta):
        raise ZeroDelta(f"{name} is the zero vector")
    return delta


def _bounds(ratios_lo: List[Fraction], ratios_hi: List[Fraction]):
    # an empty max is -inf and an empty min is +inf
    lo = max(ratios_lo) if ratios_lo else -math.inf
    hi = min(ratios_hi) if ratios_hi else math.inf
    return lo, hi


def rhs_interval(problem: LpProblem, bp: BasicPoint,
                 delta_b: Sequence) -> ThetaInterval:
    """Range the basis of ``bp`` along ``b + theta delta_b``.

    With ``u = B^{-1} b`` and ``w = B^{-1} delta_b`` the basis stays primal
    feasible iff ``u + theta w >= 0``, so

    ``lo = max{-u_i / w_i | w_i > 0}``, ``hi = min{-u_i / w_i | w_i < 0}``
    and the slope of the optimal value is ``p_B^T w``.

    Parameters
    ----------
    problem:
        The LP problem.
    bp:
        A basic optimal point with a square basis.
    delta_b:
        The nonzero direction.

    Returns
    -------
    ThetaInterval
        The interval, slope and base value.

    Raises
    ------
    ZeroDelta
        If ``delta_b`` is zero.
    RectangularBasis
        If ``rank(A) < m``.
    NotOptimalBasic
        If the basis does not certify ``bp`` as optimal.
    """
    delta_b = _checked_delta(delta_b, problem.m, "delta_b")
    B_inv = _basis_inverse(problem, bp)
    u = matvec(B_inv, problem.b)
    w = matvec(B_inv, delta_b)
    ratios_lo = [-ui / wi for ui, wi in zip(u, w) if wi > 0]
    ratios_hi = [-ui / wi for ui, wi in zip(u, w) if wi < 0]
    lo, hi = _bounds(ratios_lo, ratios_hi)
    p_B = [problem.p[j] for j in bp.basis]
    return ThetaInterval(lo, hi, dot(p_B, w), problem.objective(bp.x), bp,
                         degenerate=any(ui == 0 for ui in u),
                         kind=RhsRay.kind)


def objective_interval(problem: LpProblem, bp: BasicPoint,
                       delta_p: Sequence) -> ThetaInterval:
    """Range the basis of ``bp`` along ``p + theta delta_p``.

    For every nonbasic column ``j`` with ``z = B^{-1} A^j`` let
    ``d_j = delta_p_B^T z - delta_p_j`` and ``r_j = p_j - p_B^T z``. The
    basis stays dual feasible iff ``theta d_j >= r_j`` for all ``j``, so

    ``lo = max{r_j / d_j | d_j > 0}``, ``hi = min{r_j / d_j | d_j < 0}``
    and the slope of the optimal value is ``delta_p_B^T B^{-1} b``.

    Parameters
    ----------
    problem:
        The LP problem.
    bp:
        A basic optimal point with a square basis.
    delta_p:
        The nonzero direction.

    Returns
    -------
    ThetaInterval
        The interval, slope and base value.

    Raises
    ------
    ZeroDelta
        If ``delta_p`` is zero.
    RectangularBasis
        If ``rank(A) < m``.
    NotOptimalBasic
        If the basis does not certify ``bp`` as optimal.
    """
    delta_p = _checked_delta(delta_p, problem.n, "delta_p")
    B_inv = _basis_inverse(problem, bp)
    p_B = [problem.p[j] for j in bp.basis]
    delta_p_B = [delta_p[j] for j in bp.basis]
    ratios_lo, ratios_hi = [], []
    degenerate = False
    for j in range(problem.n):
        if j in bp.basis:
            continue
        z = matvec(B_inv, column(problem.A, j))
        d = dot(delta_p_B, z) - delta_p[j]
        r = problem.p[j] - dot(p_B, z)
        degenerate = degenerate or r == 0
        if d > 0:
            ratios_lo.append(r / d)
        elif d < 0:
            ratios_hi.append(r / d)
    lo, hi = _bounds(ratios_lo, ratios_hi)
    slope = dot(delta_p_B, matvec(B_inv, problem.b))
    return ThetaInterval(lo, hi, slope, problem.objective(bp.x), bp,
                         degenerate=degenerate, kind=ObjectiveRay.kind)


def ray_interval(problem: LpProblem, ray: PerturbationRay,
                 bp: BasicPoint = None, cap=None) -> ThetaInterval:
    """Range along ``ray``, by default at the representative basic optimal
    point of ``problem``.

    Raises
    ------
    NotOptimal
        If ``bp`` is not given and the problem is not optimal.
    """
    if bp is None:
        bp = solve_optimal(problem, cap).representative
    if isinstance(ray, RhsRay):
        return rhs_interval(problem, bp, ray.delta_b)
    return objective_interval(problem, bp, ray.delta_p)


def default_theta_grid(iv: ThetaInterval) -> List[Fraction]:
    """``{lo, lo/2, 0, hi/2, hi}`` restricted to finite values, ascending."""
    grid = {Fraction(0)}
    for bound in (iv.lo, iv.hi):
        if abs(bound) != math.inf:
            grid.update((bound, bound / 2))
    return sorted(grid)


class IntervalVerification():
    """Re-solved optimal values along a ray, one ``VerificationRow`` per
    ``theta``, ascending."""

    def __init__(self, interval: ThetaInterval, rows: List[VerificationRow]):
        self.interval = interval
        self.rows = rows

    @property
    def all_match(self) -> bool:
        return all(row.matches for row in self.rows if row.inside)

    def to_dict(self) -> List[Dict]:
        return [{"theta": rational_to_str(row.theta),
                 "inside": row.inside,
                 "status": row.status,
                 "value": None if row.value is None
                 else rational_to_str(row.value),
                 "predicted": rational_to_str(row.predicted),
                 "matches": row.matches} for row in self.rows]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.to_dict(),
                            columns=list(VerificationRow._fields))


def verify_interval(problem: LpProblem, ray: PerturbationRay,
                    iv: ThetaInterval, thetas: Iterable,
                    cap=None) -> IntervalVerification:
    """Re-solve the perturbed problem from scratch at every ``theta`` and
    compare with ``base_value + theta * slope``.

    Samples outside ``[lo, hi]`` are reported but not required to match.

    Raises
    ------
    LinearityViolation
        At the first sample inside the interval whose value does not lie on
        the line.
    """
    if ray.kind != iv.kind:
        raise ValueError(f"interval was computed for {iv.kind}, not for "
                         f"{ray.kind}")
    rows = []
    for theta in sorted({Fraction(t) for t in thetas}):
        outcome = solve(ray.apply(problem, theta), cap)
        value = outcome.value if outcome.is_optimal else None
        predicted = iv.predicted_value(theta)
        inside = theta in iv
        row = VerificationRow(theta, inside, outcome.status.value, value,
                              predicted, value == predicted)
        if inside and not row.matches:
            raise LinearityViolation(
                f"at theta={rational_to_str(theta)} the re-solved problem is "
                f"{row.status} with value {value}, expected "
                f"{rational_to_str(predicted)}", theta=theta)
        rows.append(row)
    return IntervalVerification(iv, rows)


def perturbed_certificate(problem: LpProblem, ray: PerturbationRay,
                          iv: ThetaInterval, theta) -> BasicPoint:
    """The optimal point and dual of ``ray.apply(problem, theta)`` predicted
    by the ranged basis.

    Right-hand side case: ``x = (B^{-1}(b + theta delta_b), 0)`` with the
    unchanged dual. Objective case: the unchanged ``x`` with the dual
    ``(p_B + theta delta_p_B)^T B^{-1}``. For every ``theta`` in ``iv`` the
    result satisfies ``verify_kkt`` on the perturbed problem.
    """
    bp = iv.basic_point
    perturbed = ray.apply(problem, theta)
    B_inv = invert(submatrix(problem.A, bp.basis))
    if isinstance(ray, RhsRay):
        x_B = matvec(B_inv, perturbed.b)
        x = [Fraction(0)] * problem.n
        for j, v in zip(bp.basis, x_B):
            x[j] = v
        support = [j for j in range(problem.n) if x[j] != 0]
        return BasicPoint(x, support, bp.basis,
                          dual_from_basis(problem, bp), bp.rectangular)
    candidate = BasicPoint(bp.x, bp.support, bp.basis)
    return candidate.with_dual(dual_from_basis(perturbed, candidate),
                               bp.basis, bp.rectangular)
