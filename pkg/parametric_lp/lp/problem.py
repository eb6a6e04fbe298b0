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
Standard form LP problems ``max p^T x s.t. Ax = b, x >= 0``, their duals,
convergent problem families and perturbation rays, plus JSON (de)serialization.
"""

import json
from fractions import Fraction
from typing import Any, Callable, Dict, Tuple

import numpy as np
from custom_inherit import DocInheritMeta

from parametric_lp.exceptions import DimensionMismatch, SchemaError
from parametric_lp.lp.linalg import (RationalMatrix, RationalVector, dot,
                                     matrix_norm_squared, matvec, norm_squared,
                                     rational_matrix, rational_to_str,
                                     rational_vector, transpose, zeros_matrix,
                                     zeros_vector)


class rationalArray(object):
    """Decorator-Descriptor for exact arrays that have a fixed shape.

    The decorated method returns the required shape for the owning object.
    Values are converted to read-only Fraction arrays on assignment, and an
    attribute can be assigned only once, which keeps the owning objects
    immutable.

    Example
    -------
    .. code-block:: python

        class foo():
            def __init__(self, n, v):
                self.n = n
                self.v = v

            @rationalArray
            def v(self):
                return (self.n,)
    """

    def __init__(self, shape: Callable[[Any], Tuple]):
        self.name = shape.__name__
        self.shape = shape

    def __set__(self, obj, values):
        if f"__{self.name}" in obj.__dict__:
            raise AttributeError(f"{self.name} is read-only")
        shape = self.shape(obj)
        if len(shape) == 1:
            array = rational_vector(values)
        else:
            array = rational_matrix(values, n_cols=shape[1])
        if array.shape != shape:
            raise DimensionMismatch(f"{self.name} must have shape {shape}, "
                                    f"got {array.shape}")
        obj.__dict__[f"__{self.name}"] = array

    def __get__(self, obj, objtype):
        if obj is None:
            return self
        return obj.__dict__[f"__{self.name}"]


class LpProblem():
    """The problem ``xi = (p, A, b)``: maximize ``p^T x`` subject to
    ``Ax = b`` and ``x >= 0``.

    Parameters
    ----------
    p:
        Objective vector of length ``n``.
    A:
        Constraint matrix with ``m`` rows and ``n`` columns, row-major.
    b:
        Right-hand side of length ``m``.

    Raises
    ------
    DimensionMismatch
        If the sizes are inconsistent or ``m`` or ``n`` is zero.
    """

    def __init__(self, p, A, b):
        matrix = rational_matrix(A)
        self.m, self.n = matrix.shape
        if self.m < 1 or self.n < 1:
            raise DimensionMismatch("an LP problem needs m >= 1 and n >= 1, "
                                    f"got m={self.m}, n={self.n}")
        self.A = matrix
        self.p = p
        self.b = b

    @rationalArray
    def p(self):
        return (self.n,)

    @rationalArray
    def A(self):
        return (self.m, self.n)

    @rationalArray
    def b(self):
        return (self.m,)

    def objective(self, x) -> Fraction:
        """``p^T x``"""
        return dot(self.p, x)

    def residual(self, x) -> RationalVector:
        """``Ax - b``"""
        return rational_vector(matvec(self.A, x) - self.b)

    def is_feasible(self, x) -> bool:
        """``Ax = b`` and ``x >= 0``, exactly."""
        if len(x) != self.n:
            raise DimensionMismatch(f"x has length {len(x)}, expected {self.n}")
        return all(v >= 0 for v in x) and not any(self.residual(x))

    def with_b(self, b) -> "LpProblem":
        return LpProblem(self.p, self.A, b)

    def with_p(self, p) -> "LpProblem":
        return LpProblem(p, self.A, self.b)

    def to_dict(self) -> Dict:
        return {"p": [rational_to_str(v) for v in self.p],
                "A": [[rational_to_str(v) for v in row] for row in self.A],
                "b": [rational_to_str(v) for v in self.b]}

    def __eq__(self, other):
        if not isinstance(other, LpProblem):
            return NotImplemented
        return (self.A.shape == other.A.shape
                and np.array_equal(self.p, other.p)
                and np.array_equal(self.A, other.A)
                and np.array_equal(self.b, other.b))

    def __hash__(self):
        return hash(serialize_problem(self))

    def __repr__(self):
        string = f"LpProblem(m={self.m}, n={self.n}):\n"
        string += "\tp: " + str([rational_to_str(v) for v in self.p]) + "\n"
        string += "\tA: " + str([[rational_to_str(v) for v in row]
                                 for row in self.A]) + "\n"
        string += "\tb: " + str([rational_to_str(v) for v in self.b]) + "\n"
        return string


class DualProblem():
    """The dual ``D(xi)``: minimize ``y^T b`` subject to ``y^T A >= p^T``,
    ``y`` free.

    This is a view on its primal and is never stored on its own, so the
    dimensions of ``xi`` and ``D(xi)`` cannot drift apart.

    Parameters
    ----------
    primal:
        The problem whose dual this is.
    """

    def __init__(self, primal: LpProblem):
        self.primal = primal

    @property
    def objective(self) -> RationalVector:
        """The dual objective ``b``."""
        return self.primal.b

    @property
    def constraint_matrix(self) -> RationalMatrix:
        """``A^T``: row ``j`` is the constraint ``y^T A^j >= p_j``."""
        return transpose(self.primal.A)

    @property
    def lower_bounds(self) -> RationalVector:
        """``p``, the right-hand side of ``A^T y >= p``."""
        return self.primal.p

    def slacks(self, y) -> RationalVector:
        """``y^T A - p^T`` as a vector of length ``n``."""
        if len(y) != self.primal.m:
            raise DimensionMismatch(f"y has length {len(y)}, expected "
                                    f"{self.primal.m}")
        A, p = self.primal.A, self.primal.p
        return rational_vector(dot(y, A[:, j]) - p[j]
                               for j in range(self.primal.n))

    def is_feasible(self, y) -> bool:
        return all(s >= 0 for s in self.slacks(y))

    def value(self, y) -> Fraction:
        """``y^T b``"""
        return dot(y, self.primal.b)

    def __repr__(self):
        rows = [" + ".join(f"({rational_to_str(a)})*y{i}"
                           for i, a in enumerate(row)) + f" >= "
                f"{rational_to_str(p)}"
                for row, p in zip(self.constraint_matrix, self.lower_bounds)]
        string = "minimize " + " + ".join(
            f"({rational_to_str(b)})*y{i}" for i, b in enumerate(self.objective))
        return string + "\nsubject to\n\t" + "\n\t".join(rows)


def dual_of(problem: LpProblem) -> DualProblem:
    """The dual view of ``problem``."""
    return DualProblem(problem)


class ProblemFamily():
    """The convergent sequence ``xi(N) = xi_inf + (1/N) delta_xi``.

    Parameters
    ----------
    limit:
        The limit problem ``xi_inf``.
    delta_p, delta_A, delta_b:
        Direction of approach. Any of them may be omitted, which means zero.
    """

    def __init__(self, limit: LpProblem, delta_p=None, delta_A=None,
                 delta_b=None):
        self.limit = limit
        self.m, self.n = limit.m, limit.n
        self.delta_p = zeros_vector(self.n) if delta_p is None else delta_p
        self.delta_A = (zeros_matrix(self.m, self.n) if delta_A is None
                        else delta_A)
        self.delta_b = zeros_vector(self.m) if delta_b is None else delta_b

    @rationalArray
    def delta_p(self):
        return (self.n,)

    @rationalArray
    def delta_A(self):
        return (self.m, self.n)

    @rationalArray
    def delta_b(self):
        return (self.m,)

    def instantiate(self, N: int) -> LpProblem:
        """The member ``xi(N)``, computed exactly.

        Raises
        ------
        ValueError
            If ``N`` is not a positive integer.
        """
        if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
            raise ValueError(f"N must be a positive integer, got {N!r}")
        step = Fraction(1, int(N))
        return LpProblem(self.limit.p + self.delta_p * step,
                         self.limit.A + self.delta_A * step,
                         self.limit.b + self.delta_b * step)

    def residuals(self, N: int) -> Tuple[Fraction, Fraction, Fraction]:
        """``(||p(N)-p||^2, ||A(N)-A||^2, ||b(N)-b||^2)`` of member ``N``."""
        member = self.instantiate(N)
        return (norm_squared(member.p - self.limit.p),
                matrix_norm_squared(member.A - self.limit.A),
                norm_squared(member.b - self.limit.b))

    @property
    def is_constant(self) -> bool:
        return not (any(self.delta_p) or any(self.delta_A.flatten())
                    or any(self.delta_b))

    def to_dict(self) -> Dict:
        return {"limit": self.limit.to_dict(),
                "delta_p": [rational_to_str(v) for v in self.delta_p],
                "delta_A": [[rational_to_str(v) for v in row]
                            for row in self.delta_A],
                "delta_b": [rational_to_str(v) for v in self.delta_b]}

    def __eq__(self, other):
        if not isinstance(other, ProblemFamily):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self):
        return "ProblemFamily(" + json.dumps(self.to_dict()) + ")"


def instantiate(family: ProblemFamily, N: int) -> LpProblem:
    """``xi(N)`` of ``family``. See ``ProblemFamily.instantiate``."""
    return family.instantiate(N)


class PerturbationRay(metaclass=DocInheritMeta(style="numpy")):
    """A perturbation direction for ranging: either the right-hand side
    (``b + theta delta_b``) or the objective (``p + theta delta_p``), never
    both.

    Only the concrete subclasses ``RhsRay`` and ``ObjectiveRay`` can be
    instantiated. ``from_deltas`` picks the right one.

    Parameters
    ----------
    delta:
        The perturbation direction.
    """

    kind = None

    def __init__(self, delta):
        self.delta = rational_vector(delta)

    @classmethod
    def from_deltas(cls, delta_b=None, delta_p=None) -> "PerturbationRay":
        """Build the ray for exactly one of ``delta_b`` and ``delta_p``.

        Parameters
        ----------
        delta_b:
            Right-hand side direction.
        delta_p:
            Objective direction.

        Returns
        -------
        PerturbationRay
            A ``RhsRay`` or an ``ObjectiveRay``.

        Raises
        ------
        ValueError
            If both or neither are given.
        """
        if (delta_b is None) == (delta_p is None):
            raise ValueError("exactly one of delta_b and delta_p must be given")
        if delta_b is not None:
            return RhsRay(delta_b)
        return ObjectiveRay(delta_p)

    @property
    def delta_b(self):
        """The right-hand side direction, ``None`` for objective rays."""
        return None

    @property
    def delta_p(self):
        """The objective direction, ``None`` for right-hand side rays."""
        return None

    def apply(self, problem: LpProblem, theta) -> LpProblem:
        """The perturbed problem at step ``theta``.

        Parameters
        ----------
        problem:
            The unperturbed problem.
        theta:
            The exact step length.

        Returns
        -------
        LpProblem
            The perturbed problem.
        """
        raise NotImplementedError()

    def to_dict(self) -> Dict:
        """JSON form ``{"delta_b": [...]}`` or ``{"delta_p": [...]}``."""
        return {self.kind: [rational_to_str(v) for v in self.delta]}


class RhsRay(PerturbationRay):
    """Right-hand side perturbation ``(p, A, b + theta delta_b)``."""

    kind = "delta_b"

    @property
    def delta_b(self):
        return self.delta

    def apply(self, problem: LpProblem, theta) -> LpProblem:
        if len(self.delta) != problem.m:
            raise DimensionMismatch(f"delta_b has length {len(self.delta)}, "
                                    f"expected {problem.m}")
        return problem.with_b(problem.b + self.delta * Fraction(theta))


class ObjectiveRay(PerturbationRay):
    """Objective perturbation ``(p + theta delta_p, A, b)``."""

    kind = "delta_p"

    @property
    def delta_p(self):
        return self.delta

    def apply(self, problem: LpProblem, theta) -> LpProblem:
        if len(self.delta) != problem.n:
            raise DimensionMismatch(f"delta_p has length {len(self.delta)}, "
                                    f"expected {problem.n}")
        return problem.with_p(problem.p + self.delta * Fraction(theta))


def _require(document: Dict, key: str, context: str):
    if not isinstance(document, dict):
        raise SchemaError(f"{context} must be a JSON object")
    if key not in document:
        raise SchemaError(f"{context} is missing the field {key!r}")
    return document[key]


def _check_entries(values, name: str):
    if not isinstance(values, list):
        raise SchemaError(f"{name} must be a JSON array")
    for value in values:
        if isinstance(value, (float, bool)) or not isinstance(value, (str, int)):
            raise SchemaError(f"{name} entries must be rational strings or "
                              f"integers, got {value!r}")
    return values


def _check_rows(rows, name: str):
    if not isinstance(rows, list) or not rows:
        raise SchemaError(f"{name} must be a non-empty array of rows")
    for row in rows:
        _check_entries(row, name)
    if len({len(row) for row in rows}) != 1:
        raise SchemaError(f"{name} is ragged: row lengths "
                          f"{[len(row) for row in rows]}")
    return rows


def problem_from_dict(document: Dict, context: str = "problem") -> LpProblem:
    """Build an ``LpProblem`` from its JSON object form."""
    p = _check_entries(_require(document, "p", context), "p")
    A = _check_rows(_require(document, "A", context), "A")
    b = _check_entries(_require(document, "b", context), "b")
    try:
        return LpProblem(p, A, b)
    except DimensionMismatch as err:
        raise SchemaError(f"{context}: {err}") from err


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise SchemaError(f"not a JSON document: {err}") from err


def parse_problem(text: str) -> LpProblem:
    """Parse a problem document ``{"p": [...], "A": [[...]], "b": [...]}``.

    Raises
    ------
    SchemaError
        For invalid JSON, missing fields, ragged or inconsistent shapes.
    ValueError
        For malformed rationals or zero denominators.
    """
    return problem_from_dict(_loads(text))


def serialize_problem(problem: LpProblem) -> str:
    """Canonical compact JSON with keys in the order ``p, A, b``."""
    return json.dumps(problem.to_dict(), separators=(",", ":"))


def family_from_dict(document: Dict) -> ProblemFamily:
    """Build a ``ProblemFamily`` from its JSON object form."""
    limit = problem_from_dict(_require(document, "limit", "family"),
                              context="limit")
    delta_p = document.get("delta_p")
    delta_A = document.get("delta_A")
    delta_b = document.get("delta_b")
    if delta_p is not None:
        _check_entries(delta_p, "delta_p")
    if delta_A is not None:
        _check_rows(delta_A, "delta_A")
    if delta_b is not None:
        _check_entries(delta_b, "delta_b")
    try:
        return ProblemFamily(limit, delta_p, delta_A, delta_b)
    except DimensionMismatch as err:
        raise SchemaError(f"family: {err}") from err


def parse_family(text: str) -> ProblemFamily:
    """Parse a family document ``{"limit": problem, "delta_p": ...,
    "delta_A": ..., "delta_b": ...}``. Missing deltas are zero."""
    return family_from_dict(_loads(text))


def serialize_family(family: ProblemFamily) -> str:
    return json.dumps(family.to_dict(), separators=(",", ":"))


def parse_vector(text: str, name: str = "vector") -> RationalVector:
    """Parse a JSON array of rationals, e.g. a perturbation direction."""
    return rational_vector(_check_entries(_loads(text), name))
