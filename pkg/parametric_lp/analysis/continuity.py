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
Empirical continuity probes along convergent families
``xi(N) = xi_inf + (1/N) delta_xi``.

Every probe works on exact values: optimal values, gaps to the limit and
squared distances are Fractions, and verdicts come from the exact decay test
``decays``. A verdict is evidence along the sampled ``N``, never a proof.
"""

from collections import namedtuple
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from parametric_lp.exceptions import (NoConvergentSelection, NotOptimal,
                                      ParametricLPError)
from parametric_lp.lp.linalg import (RationalVector, columns_independent,
                                     matvec, norm_squared, pseudo_inverse,
                                     rational_to_str, rational_vector,
                                     submatrix)
from parametric_lp.lp.problem import LpProblem, ProblemFamily
from parametric_lp.lp.solver import (SolveOutcome, Status, face_direction,
                                     solve)
from parametric_lp.utilities import example1_family

DEFAULT_NS = (1, 16, 256)

LogEntry = namedtuple("LogEntry", ["N", "value"])
ProbeSample = namedtuple("ProbeSample", ["N", "value", "gap"])
ConcavityRow = namedtuple("ConcavityRow",
                          ["index", "t", "value_1", "value_2", "value_mix",
                           "bound", "holds", "strict"])


def _vector(v) -> List[str]:
    return [rational_to_str(q) for q in v]


def _checked_ns(Ns: Iterable[int]) -> Tuple[int, ...]:
    Ns = tuple(sorted(set(Ns)))
    if not Ns:
        raise ValueError("at least one N is needed")
    for N in Ns:
        if isinstance(N, bool) or not isinstance(N, (int, np.integer)) \
                or N < 1:
            raise ValueError(f"N must be a positive integer, got {N!r}")
    return Ns


def decays(gaps: Mapping[int, Fraction]) -> bool:
    """Exact stand-in for ``gap(N) -> 0`` on finitely many samples.

    True if every gap is zero. Otherwise, for the largest sampled triple
    ``(N, 16N, 256N)``, require ``gap(16N) <= gap(N)/8`` and
    ``gap(256N) <= gap(16N)/8``. Without such a triple, use the two largest
    samples ``N1 < N2``: ``gap(N2) N2 <= 2 gap(N1) N1`` and ``gap(N2)`` is
    zero or strictly below ``gap(N1)``. A single nonzero sample never
    decays.
    """
    if all(gap == 0 for gap in gaps.values()):
        return True
    Ns = sorted(gaps)
    triples = [N for N in Ns if 16 * N in gaps and 256 * N in gaps]
    if triples:
        N = triples[-1]
        return (gaps[16 * N] <= gaps[N] / 8
                and gaps[256 * N] <= gaps[16 * N] / 8)
    if len(Ns) < 2:
        return False
    N1, N2 = Ns[-2], Ns[-1]
    g1, g2 = gaps[N1], gaps[N2]
    return g2 * N2 <= 2 * g1 * N1 and (g2 == 0 or g2 < g1)


class SelectionLimit():
    """A support-stable selection ``x(N)`` across the sampled ``N`` and its
    exact limit.

    Parameters
    ----------
    support:
        The support shared by ``x(N)`` at every sampled ``N``.
    limit:
        The limit point, or ``None`` if there is no convergent selection on
        this support.
    feasible:
        Whether ``limit`` is feasible for the limit problem.
    optimal:
        Whether ``limit`` attains the limit optimal value, ``None`` for
        feasible-set selections.
    reason:
        Why no limit was found.
    """

    def __init__(self, support: Tuple[int, ...],
                 limit: Optional[RationalVector], feasible: Optional[bool],
                 optimal: Optional[bool] = None, reason: str = None):
        self.support = support
        self.limit = limit
        self.feasible = feasible
        self.optimal = optimal
        self.reason = reason

    def to_dict(self) -> Dict:
        out = {"support": list(self.support),
               "limit": None if self.limit is None else _vector(self.limit),
               "feasible": self.feasible}
        if self.optimal is not None:
            out["optimal"] = self.optimal
        if self.reason is not None:
            out["reason"] = self.reason
        return out


class ProbeReport():
    """Probe results for one family over the sampled ``N``, ascending.

    Each probe fills its own section; sections of probes that were not run
    stay ``None``. Solves are cached per ``N``, so running several probes on
    one report solves every member once.

    Parameters
    ----------
    family:
        The probed family.
    Ns:
        The sample, positive integers.
    cap:
        Enumeration cap for solving.
    enable_logging:
        Keep a ``LogEntry(N, value)`` per solved member in ``log``.
    """

    def __init__(self, family: ProblemFamily, Ns: Iterable[int] = DEFAULT_NS,
                 cap=None, enable_logging: bool = False):
        self.family = family
        self.Ns = _checked_ns(Ns)
        self.cap = cap
        self.log = [] if enable_logging else None
        self._outcomes = {}

        self.limit_value = None
        self.samples = None
        self.value_gap_vanishing = None
        self.value_gap_reason = None
        self.usc_X_selections = None
        self.usc_limit_feasible = None
        self.usc_S_selections = None
        self.usc_S_limit_optimal = None
        self.lsc_S_vertices = None
        self.lsc_S_distances = None
        self.lsc_gap_vanishing = None
        self.lsc_X_vertices = None
        self.lsc_X_distances = None
        self.lsc_X_gap_vanishing = None

    def problem(self, N: Optional[int]) -> LpProblem:
        """The member ``xi(N)``, or the limit for ``N=None``."""
        if N is None:
            return self.family.limit
        return self.family.instantiate(N)

    def outcome(self, N: Optional[int]) -> SolveOutcome:
        if N not in self._outcomes:
            outcome = solve(self.problem(N), self.cap)
            self._outcomes[N] = outcome
            if self.log is not None:
                self.log.append(LogEntry(N="limit" if N is None else N,
                                         value=outcome.value))
        return self._outcomes[N]

    def optimal_outcome(self, N: Optional[int]) -> SolveOutcome:
        outcome = self.outcome(N)
        if not outcome.is_optimal:
            name = "the limit" if N is None else f"N={N}"
            raise NotOptimal(f"{name} is {outcome.status.value}",
                             index="limit" if N is None else N,
                             status=outcome.status)
        return outcome

    def feasible_outcome(self, N: Optional[int]) -> SolveOutcome:
        outcome = self.outcome(N)
        if outcome.status is Status.INFEASIBLE:
            name = "the limit" if N is None else f"N={N}"
            raise NotOptimal(f"{name} is infeasible",
                             index="limit" if N is None else N,
                             status=outcome.status)
        return outcome

    @property
    def vertex_bound_only(self) -> bool:
        """True if a distance verdict is negative. Distances are measured to
        the nearest basic point only, an upper bound on the distance to the
        whole set."""
        return (self.lsc_gap_vanishing is False
                or self.lsc_X_gap_vanishing is False)

    def verdicts(self) -> Dict:
        return {"value_gap_vanishing": self.value_gap_vanishing,
                "lsc_gap_vanishing": self.lsc_gap_vanishing,
                "lsc_X_gap_vanishing": self.lsc_X_gap_vanishing,
                "usc_limit_feasible": self.usc_limit_feasible,
                "usc_S_limit_optimal": self.usc_S_limit_optimal,
                "vertex_bound_only": self.vertex_bound_only}

    def to_dict(self) -> Dict:
        out = {"Ns": list(self.Ns), "verdicts": self.verdicts()}
        if self.samples is not None:
            out["limit_value"] = rational_to_str(self.limit_value)
            out["samples"] = [{"N": s.N, "value": rational_to_str(s.value),
                               "gap": rational_to_str(s.gap)}
                              for s in self.samples]
            if self.value_gap_reason is not None:
                out["value_gap_reason"] = self.value_gap_reason
        for name, selections in (("usc_X", self.usc_X_selections),
                                 ("usc_S", self.usc_S_selections)):
            if selections is not None:
                out[name] = [sel.to_dict() for sel in selections]
        for name, vertices, distances in (
                ("lsc_S", self.lsc_S_vertices, self.lsc_S_distances),
                ("lsc_X", self.lsc_X_vertices, self.lsc_X_distances)):
            if vertices is not None:
                out[name] = {
                    "limit_vertices": [_vector(v) for v in vertices],
                    "distances": [{"N": N, "dist2": _vector(distances[N])}
                                  for N in self.Ns]}
        return out

    def to_frame(self) -> pd.DataFrame:
        """One row per ``N``: ``N, V, gap`` and ``dist2_S_k`` / ``dist2_X_k``
        for every limit vertex ``k``, rationals as strings."""
        rows = []
        values = {} if self.samples is None else {s.N: s for s in
                                                  self.samples}
        for N in self.Ns:
            row = {"N": N}
            if N in values:
                row["V"] = rational_to_str(values[N].value)
                row["gap"] = rational_to_str(values[N].gap)
            for tag, distances in (("S", self.lsc_S_distances),
                                   ("X", self.lsc_X_distances)):
                if distances is not None:
                    for k, d in enumerate(distances[N]):
                        row[f"dist2_{tag}_{k}"] = rational_to_str(d)
            rows.append(row)
        return pd.DataFrame(rows)

    def to_csv(self, path_or_buf=None):
        """``to_frame().to_csv(index=False)``; returns the text if no path is
        given."""
        return self.to_frame().to_csv(path_or_buf, index=False)

    def __repr__(self):
        return f"ProbeReport(Ns={list(self.Ns)}, {self.verdicts()})"


def _report(family, Ns, cap, enable_logging, report) -> ProbeReport:
    if report is None:
        return ProbeReport(family, Ns, cap, enable_logging)
    return report


def probe_value_continuity(family: ProblemFamily,
                           Ns: Iterable[int] = DEFAULT_NS, cap=None,
                           enable_logging: bool = False,
                           report: ProbeReport = None) -> ProbeReport:
    """Tabulate ``V(xi(N))`` and ``gap(N) = |V(xi(N)) - V(xi_inf)|``.

    Parameters
    ----------
    family:
        The family to probe.
    Ns:
        Positive integers to sample.
    cap:
        Enumeration cap for solving.
    enable_logging:
        Log every solve on the report.
    report:
        A report to fill in instead of a new one.

    Returns
    -------
    ProbeReport
        With ``samples``, ``limit_value`` and ``value_gap_vanishing`` set.
        Families with fixed ``A`` and ``p`` whose limit optimum is degenerate
        get ``value_gap_vanishing = None`` and a ``value_gap_reason``.

    Raises
    ------
    NotOptimal
        Naming the first ``N`` (or ``"limit"``) that is not optimal.
    """
    report = _report(family, Ns, cap, enable_logging, report)
    limit_value = report.optimal_outcome(None).value
    samples = []
    for N in report.Ns:
        value = report.optimal_outcome(N).value
        samples.append(ProbeSample(N, value, abs(value - limit_value)))
    report.limit_value = limit_value
    report.samples = samples
    report.value_gap_vanishing = decays({s.N: s.gap for s in samples})
    report.value_gap_reason = None
    family = report.family
    if not (any(family.delta_p) or any(v != 0 for v in family.delta_A.flat)
            or family.is_constant):
        bp = report.optimal_outcome(None).representative
        if any(bp.x[j] == 0 for j in bp.basis):
            report.value_gap_vanishing = None
            report.value_gap_reason = (
                f"limit optimum {_vector(bp.x)} is degenerate on basis "
                f"{list(bp.basis)} with fixed A and p")
    return report


def _affine_limit(points: Dict[int, RationalVector],
                  support: Tuple[int, ...]) -> RationalVector:
    # fit x(N) = c + d/N on the two largest N and check it on the rest
    Ns = sorted(points)
    if len(Ns) < 3:
        raise NoConvergentSelection(
            f"support {support}: the limit columns are dependent and fewer "
            "than three samples cannot confirm an affine selection",
            support=support)
    N1, N2 = Ns[-2], Ns[-1]
    step = Fraction(1, N1) - Fraction(1, N2)
    d = (points[N1] - points[N2]) / step
    c = points[N2] - d * Fraction(1, N2)
    for N in Ns:
        if not np.array_equal(c + d * Fraction(1, N), points[N]):
            raise NoConvergentSelection(
                f"support {support}: x(N) is not affine in 1/N, no exact "
                "limit", support=support)
    return rational_vector(c)


def selection_limit(family: ProblemFamily, support: Tuple[int, ...],
                    points: Dict[int, RationalVector]) -> RationalVector:
    """Exact limit of the selection ``points[N]`` sharing ``support``.

    If the support columns of the limit matrix are independent, the basis
    formula ``x_B = B^- b`` is continuous there and the limit is
    ``B_inf^- b_inf``. Otherwise the selection must be affine in ``1/N``
    on at least three samples.

    Raises
    ------
    NoConvergentSelection
        If neither applies.
    """
    limit = family.limit
    if columns_independent(limit.A, support):
        x = [Fraction(0)] * limit.n
        if support:
            x_B = matvec(pseudo_inverse(submatrix(limit.A, support)),
                         limit.b)
            for j, v in zip(support, x_B):
                x[j] = v
        return rational_vector(x)
    return _affine_limit(points, support)


def _stable_selections(report: ProbeReport, optimal: bool):
    by_support = {}
    for N in report.Ns:
        outcome = (report.optimal_outcome(N) if optimal
                   else report.feasible_outcome(N))
        points = outcome.optimal_basics if optimal else outcome.all_basics
        for bp in points:
            by_support.setdefault(bp.support, {})[N] = bp.x
    return [(support, points) for support, points in sorted(by_support.items())
            if len(points) == len(report.Ns)]


def probe_usc_X(family: ProblemFamily, Ns: Iterable[int] = DEFAULT_NS,
                cap=None, enable_logging: bool = False,
                report: ProbeReport = None) -> ProbeReport:
    """Limits of support-stable selections ``x(N)`` of basic feasible
    points must be feasible for the limit problem.

    Selections without an exact limit are recorded with their reason.
    ``usc_limit_feasible`` is the conjunction over all limits found.

    Raises
    ------
    NotOptimal
        With status infeasible, naming the first infeasible ``N``.
    """
    report = _report(family, Ns, cap, enable_logging, report)
    limit = family.limit
    selections = []
    for support, points in _stable_selections(report, optimal=False):
        try:
            x = selection_limit(family, support, points)
        except NoConvergentSelection as err:
            selections.append(SelectionLimit(support, None, None,
                                             reason=str(err)))
            continue
        selections.append(SelectionLimit(support, x, limit.is_feasible(x)))
    report.usc_X_selections = selections
    report.usc_limit_feasible = all(sel.feasible for sel in selections
                                    if sel.limit is not None)
    return report


def probe_usc_S(family: ProblemFamily, Ns: Iterable[int] = DEFAULT_NS,
                cap=None, enable_logging: bool = False,
                report: ProbeReport = None) -> ProbeReport:
    """Limits of support-stable selections ``x(N)`` of basic optimal points
    must be optimal for the limit problem: ``A_inf x = b_inf``, ``x >= 0``
    and ``p_inf^T x = V(xi_inf)``.

    Raises
    ------
    NotOptimal
        Naming the first member that is not optimal.
    """
    report = _report(family, Ns, cap, enable_logging, report)
    limit = family.limit
    limit_value = report.optimal_outcome(None).value
    selections = []
    for support, points in _stable_selections(report, optimal=True):
        try:
            x = selection_limit(family, support, points)
        except NoConvergentSelection as err:
            selections.append(SelectionLimit(support, None, None, None,
                                             reason=str(err)))
            continue
        feasible = limit.is_feasible(x)
        selections.append(SelectionLimit(
            support, x, feasible,
            optimal=feasible and limit.objective(x) == limit_value))
    report.usc_S_selections = selections
    report.usc_S_limit_optimal = all(sel.optimal for sel in selections
                                     if sel.limit is not None)
    return report


def _nearest_distances(vertices, members) -> List[Fraction]:
    return [min(norm_squared(v - z) for z in members) for v in vertices]


def probe_lsc_S(family: ProblemFamily, Ns: Iterable[int] = DEFAULT_NS,
                cap=None, enable_logging: bool = False,
                report: ProbeReport = None) -> ProbeReport:
    """Every basic optimal point of the limit must be approached by basic
    optimal points of the members.

    ``dist2(N)`` is the squared distance from a limit vertex to the nearest
    point of ``S*(xi(N))``; ``lsc_gap_vanishing`` is true iff it decays for
    every limit vertex.

    Raises
    ------
    NotOptimal
        Naming the first member that is not optimal.
    """
    report = _report(family, Ns, cap, enable_logging, report)
    vertices = [bp.x for bp in report.optimal_outcome(None).optimal_basics]
    distances = {}
    for N in report.Ns:
        members = [bp.x for bp in report.optimal_outcome(N).optimal_basics]
        distances[N] = _nearest_distances(vertices, members)
    report.lsc_S_vertices = vertices
    report.lsc_S_distances = distances
    report.lsc_gap_vanishing = all(
        decays({N: distances[N][k] for N in report.Ns})
        for k in range(len(vertices)))
    return report


def probe_lsc_X(family: ProblemFamily, Ns: Iterable[int] = DEFAULT_NS,
                cap=None, enable_logging: bool = False,
                report: ProbeReport = None) -> ProbeReport:
    """Like ``probe_lsc_S`` for the feasible sets: every basic feasible
    point of the limit against ``X*(xi(N))``. Expected to vanish when the
    limit feasible set is bounded.

    Raises
    ------
    NotOptimal
        With status infeasible, naming the first infeasible member.
    """
    report = _report(family, Ns, cap, enable_logging, report)
    vertices = [bp.x for bp in report.feasible_outcome(None).all_basics]
    distances = {}
    for N in report.Ns:
        members = [bp.x for bp in report.feasible_outcome(N).all_basics]
        distances[N] = _nearest_distances(vertices, members)
    report.lsc_X_vertices = vertices
    report.lsc_X_distances = distances
    report.lsc_X_gap_vanishing = all(
        decays({N: distances[N][k] for N in report.Ns})
        for k in range(len(vertices)))
    return report


def probe_family(family: ProblemFamily, Ns: Iterable[int] = DEFAULT_NS,
                 cap=None, enable_logging: bool = False) -> ProbeReport:
    """Run every probe on one report: value continuity, usc of ``X`` and
    ``S``, lsc of ``S`` and ``X``.

    Raises
    ------
    NotOptimal
        Naming the first member that is not optimal.
    """
    report = ProbeReport(family, Ns, cap, enable_logging)
    for probe in (probe_value_continuity, probe_usc_X, probe_usc_S,
                  probe_lsc_S, probe_lsc_X):
        probe(family, report=report)
    return report


class ConcavityReport():
    """One ``ConcavityRow`` per triple ``(b1, b2, t)``. ``holds`` is true iff
    ``V(t b1 + (1-t) b2) >= t V(b1) + (1-t) V(b2)`` for every triple."""

    def __init__(self, rows: List[ConcavityRow]):
        self.rows = rows

    @property
    def holds(self) -> bool:
        return all(row.holds for row in self.rows)

    @property
    def strict_count(self) -> int:
        return sum(row.strict for row in self.rows)

    def to_dict(self) -> List[Dict]:
        return [{"index": row.index, "t": rational_to_str(row.t),
                 "value_1": rational_to_str(row.value_1),
                 "value_2": rational_to_str(row.value_2),
                 "value_mix": rational_to_str(row.value_mix),
                 "bound": rational_to_str(row.bound),
                 "holds": row.holds, "strict": row.strict}
                for row in self.rows]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.to_dict(),
                            columns=list(ConcavityRow._fields))


def check_concavity(p: Sequence, A, triples: Iterable[Tuple],
                    cap=None) -> ConcavityReport:
    """Check concavity of ``V(p, A, .)`` on the given ``(b1, b2, t)``.

    Parameters
    ----------
    p, A:
        The fixed objective and constraint matrix.
    triples:
        Right-hand sides ``b1``, ``b2`` and a weight ``t`` in ``(0, 1)``.

    Raises
    ------
    ValueError
        If a weight is not strictly between 0 and 1.
    NotOptimal
        Naming the index of the first triple with a problem that is not
        optimal.
    """
    base = LpProblem(p, A, [0] * len(A))
    rows = []
    for index, (b1, b2, t) in enumerate(triples):
        t = Fraction(t)
        if not 0 < t < 1:
            raise ValueError(f"t must lie in (0, 1), got {t}")
        b1, b2 = rational_vector(b1), rational_vector(b2)
        values = []
        for b in (b1, b2, b1 * t + b2 * (1 - t)):
            outcome = solve(base.with_b(b), cap)
            if not outcome.is_optimal:
                raise NotOptimal(f"triple {index} has a problem that is "
                                 f"{outcome.status.value}", index=index,
                                 status=outcome.status)
            values.append(outcome.value)
        v1, v2, v_mix = values
        bound = t * v1 + (1 - t) * v2
        rows.append(ConcavityRow(index, t, v1, v2, v_mix, bound,
                                 v_mix >= bound, v_mix > bound))
    return ConcavityReport(rows)


def run_example1(Ns: Iterable[int] = DEFAULT_NS, cap=None) -> ProbeReport:
    """Reproduce the family ``max (1/N) x_1 s.t. (1/N) x_1 + x_2 = 1``.

    Checks ``V(xi(N)) = 1`` and ``S*(xi(N)) = {(N, 0)}`` for every ``N``,
    ``V(xi_inf) = 0``, ``(0, 1)`` optimal in the limit and ``(1, 0)`` a
    recession direction of the limit optimal face, then returns the full
    probe report, in which the value gap does not vanish.

    Raises
    ------
    ParametricLPError
        Naming the first check that fails.
    """
    def expect(condition, message):
        if not condition:
            raise ParametricLPError(f"example1 reproduction failed: {message}")

    family = example1_family()
    report = probe_family(family, Ns, cap)
    for N in report.Ns:
        outcome = report.outcome(N)
        expect(outcome.value == 1, f"V(xi({N})) = {outcome.value}")
        expect([list(bp.x) for bp in outcome.optimal_basics] == [[N, 0]],
               f"S*(xi({N})) = {outcome.optimal_basics}")
    limit = report.outcome(None)
    expect(limit.value == 0, f"V(xi_inf) = {limit.value}")
    expect([0, 1] in [list(bp.x) for bp in limit.optimal_basics],
           "(0, 1) is not optimal in the limit")
    d = face_direction(family.limit, cap)
    expect(d is not None and list(d) == [1, 0], f"face direction {d}")
    expect(report.value_gap_vanishing is False, "the value gap vanishes")
    return report
