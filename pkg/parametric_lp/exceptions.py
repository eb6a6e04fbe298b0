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
Exceptions and warnings raised by ``parametric_lp``.

Errors caused by bad input also derive from ``ValueError`` so callers that
only catch ``ValueError`` keep working.
"""


class ParametricLPError(Exception):
    """Base class of all errors raised by this package."""


class DegenerateBasisWarning(UserWarning):
    """A dual or a regularity test had to fall back to the pseudo-inverse
    of a rectangular basis."""


class SingularMatrix(ParametricLPError, ValueError):
    """Raised when inverting a rank deficient square matrix."""


class DependentColumns(ParametricLPError, ValueError):
    """Raised when a pseudo-inverse is requested for dependent columns."""


class SchemaError(ParametricLPError, ValueError):
    """Raised when a JSON document does not match the expected schema."""


class DimensionMismatch(ParametricLPError, ValueError):
    """Raised when vectors or matrices have incompatible sizes."""


class CapExceeded(ParametricLPError, RuntimeError):
    """Raised when a problem is too large for basic-point enumeration."""


class SingularBasis(ParametricLPError, ValueError):
    """Raised when the basis columns of a basic point are not independent."""


class NotOptimalBasic(ParametricLPError, ValueError):
    """Raised when a basic point passed to ranging is not KKT-certified."""


class RectangularBasis(ParametricLPError, ValueError):
    """Raised when ranging needs a square basis but only a rectangular one
    exists (rank(A) < m)."""


class ZeroDelta(ParametricLPError, ValueError):
    """Raised when a perturbation direction is the zero vector."""


class Infeasible(ParametricLPError):
    """Raised when an operation needs a feasible problem."""


class NotOptimal(ParametricLPError):
    """Raised when an operation needs an optimal problem.

    Parameters
    ----------
    message:
        Human readable description.
    index:
        Position of the offending problem, e.g. ``N`` in a family probe or
        the list index in a batch. ``None`` for single problems.
    status:
        The solve status that was found instead.
    """

    def __init__(self, message: str, index=None, status=None):
        super().__init__(message)
        self.index = index
        self.status = status


class LinearityViolation(ParametricLPError, AssertionError):
    """Raised when a re-solved value inside a ranging interval does not
    lie on the predicted line."""

    def __init__(self, message: str, theta=None):
        super().__init__(message)
        self.theta = theta


class NoConvergentSelection(ParametricLPError):
    """Raised when a support-stable selection has no exact limit."""

    def __init__(self, message: str, support=None):
        super().__init__(message)
        self.support = support
