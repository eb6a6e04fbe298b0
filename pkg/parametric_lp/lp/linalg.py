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
Exact rational linear algebra on numpy object arrays.

Every scalar is a ``fractions.Fraction`` and every vector or matrix returned
by the constructors in this module is a read-only numpy array of dtype
``object``. Nothing here ever takes a square root: norms are compared through
their squares, so all results are exact.
"""

import re
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, List, Sequence, Union

import numpy as np

from parametric_lp.exceptions import (DependentColumns, DimensionMismatch,
                                      SingularMatrix)

Rational = Fraction
RationalVector = np.ndarray
RationalMatrix = np.ndarray

_RATIONAL_PATTERN = re.compile(r"^[+-]?\d+(/\d+)?$")


def as_rational(value: Union[int, str, Fraction]) -> Fraction:
    """Convert an integer, a ``"num/den"`` string or a Fraction to a Fraction.

    Parameters
    ----------
    value:
        An ``int``, a ``Fraction`` or a string such as ``"-3/4"`` or ``"5"``.

    Returns
    -------
    Fraction
        The value in lowest terms.

    Raises
    ------
    ValueError
        For floats, decimal strings, malformed strings and zero denominators.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"{value!r} is not a rational number")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_PATTERN.match(text):
            raise ValueError(f"malformed rational {value!r}")
        if "/" in text and int(text.split("/")[1]) == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return Fraction(text)
    raise ValueError(f"{value!r} of type {type(value).__name__} is not an "
                     "exact rational; pass an int or a 'num/den' string")


def rational_to_str(value: Fraction) -> str:
    """Canonical string form: ``"num/den"`` in lowest terms or a bare integer."""
    return str(Fraction(value))


def _freeze(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def rational_vector(entries: Iterable) -> RationalVector:
    """Build a read-only vector of Fractions from any iterable of rationals."""
    entries = list(entries)
    out = np.empty(len(entries), dtype=object)
    for i, value in enumerate(entries):
        out[i] = as_rational(value)
    return _freeze(out)


def rational_matrix(rows: Union[Sequence[Sequence], np.ndarray],
                    n_cols: int = None) -> RationalMatrix:
    """Build a read-only matrix of Fractions from row-major data.

    Parameters
    ----------
    rows:
        A sequence of equally long rows, or a 2D array.
    n_cols:
        Number of columns, only needed when ``rows`` is empty.

    Raises
    ------
    DimensionMismatch
        If the rows do not all have the same length.
    """
    if isinstance(rows, np.ndarray) and rows.ndim == 2:
        m, n = rows.shape
        rows = rows.tolist()
    else:
        rows = [list(row) for row in rows]
        m = len(rows)
        n = len(rows[0]) if m else (n_cols or 0)
        if any(len(row) != n for row in rows):
            raise DimensionMismatch("ragged matrix: rows have lengths "
                                    f"{[len(row) for row in rows]}")
    out = np.empty((m, n), dtype=object)
    for i, row in enumerate(rows):
        for j, value in enumerate(row):
            out[i, j] = as_rational(value)
    return _freeze(out)


def zeros_vector(n: int) -> RationalVector:
    return rational_vector([0] * n)


def zeros_matrix(m: int, n: int) -> RationalMatrix:
    return rational_matrix([[0] * n for _ in range(m)], n_cols=n)


def identity(n: int) -> RationalMatrix:
    """The exact identity matrix of size ``n``."""
    return rational_matrix([[int(i == j) for j in range(n)] for i in range(n)],
                           n_cols=n)


def column(M: RationalMatrix, j: int) -> RationalVector:
    """The column ``M^j`` as a vector."""
    return _freeze(M[:, j].copy())


def submatrix(M: RationalMatrix, cols: Iterable[int]) -> RationalMatrix:
    """The matrix formed by the columns ``cols`` of ``M``, in that order."""
    cols = list(cols)
    out = np.empty((M.shape[0], len(cols)), dtype=object)
    for k, j in enumerate(cols):
        out[:, k] = M[:, j]
    return _freeze(out)


def transpose(M: RationalMatrix) -> RationalMatrix:
    return _freeze(M.T.copy())


def dot(u: Sequence, v: Sequence) -> Fraction:
    """Exact inner product. Empty vectors give ``0``."""
    if len(u) != len(v):
        raise DimensionMismatch(f"cannot take the inner product of vectors "
                                f"of lengths {len(u)} and {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def matvec(M: RationalMatrix, v: Sequence) -> RationalVector:
    """Exact product ``M v``."""
    if M.shape[1] != len(v):
        raise DimensionMismatch(f"matrix with {M.shape[1]} columns cannot "
                                f"multiply a vector of length {len(v)}")
    return rational_vector([dot(row, v) for row in M])


def matmul(A: RationalMatrix, B: RationalMatrix) -> RationalMatrix:
    """Exact product ``A B``."""
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"shapes {A.shape} and {B.shape} are not "
                                "aligned")
    out = np.empty((A.shape[0], B.shape[1]), dtype=object)
    for i in range(A.shape[0]):
        for j in range(B.shape[1]):
            out[i, j] = dot(A[i, :], B[:, j])
    return _freeze(out)


def norm_squared(v: Sequence) -> Fraction:
    """The squared Euclidean norm, exactly."""
    return sum((Fraction(x) * x for x in v), Fraction(0))


def matrix_norm_squared(M: RationalMatrix) -> Fraction:
    """The squared matrix norm: sum over the columns of their squared norms."""
    return sum((norm_squared(M[:, j]) for j in range(M.shape[1])), Fraction(0))


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _integer_rows(M: RationalMatrix) -> List[List[int]]:
    """Scale each row by the lcm of its denominators. Row scaling keeps the
    rank and the row space."""
    rows = []
    for row in M:
        scale = reduce(_lcm, (q.denominator for q in row), 1)
        rows.append([int(q * scale) for q in row])
    return rows


def _bareiss_rank(rows: List[List[int]], n_cols: int) -> int:
    # fraction-free elimination: every division below is exact
    rows = [list(row) for row in rows]
    n_rows = len(rows)
    rank = 0
    previous = 1
    for c in range(n_cols):
        if rank == n_rows:
            break
        pivot = next((i for i in range(rank, n_rows) if rows[i][c] != 0),
                     None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        top = rows[rank]
        for i in range(rank + 1, n_rows):
            row = rows[i]
            for k in range(c + 1, n_cols):
                row[k] = (top[c] * row[k] - row[c] * top[k]) // previous
            row[c] = 0
        previous = top[c]
        rank += 1
    return rank


def rank(M: RationalMatrix) -> int:
    """Dimension of the column space of ``M``.

    Computed by fraction-free (Bareiss) Gaussian elimination on the
    row-scaled integer matrix, pivoting on the first nonzero entry.
    """
    if M.shape[0] == 0 or M.shape[1] == 0:
        return 0
    return _bareiss_rank(_integer_rows(M), M.shape[1])


def columns_independent(M: RationalMatrix, J: Iterable[int]) -> bool:
    """True iff the columns of ``M`` indexed by ``J`` are linearly independent.

    The empty set is independent.
    """
    J = list(J)
    if not J:
        return True
    if len(J) > M.shape[0]:
        return False
    return rank(submatrix(M, J)) == len(J)


def invert(B: RationalMatrix) -> RationalMatrix:
    """Exact inverse of a square matrix by Gauss-Jordan elimination.

    Raises
    ------
    SingularMatrix
        If ``B`` is not square or is rank deficient.
    """
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise SingularMatrix(f"matrix of shape {B.shape} is not square")
    n = B.shape[0]
    X = [[Fraction(v) for v in row] for row in B]
    Y = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    for i in range(n):
        pivot = next((k for k in range(i, n) if X[k][i] != 0), None)
        if pivot is None:
            raise SingularMatrix("matrix is not invertible")
        X[i], X[pivot] = X[pivot], X[i]
        Y[i], Y[pivot] = Y[pivot], Y[i]

        scale = X[i][i]
        X[i] = [v / scale for v in X[i]]
        Y[i] = [v / scale for v in Y[i]]

        for k in range(n):
            if k == i or X[k][i] == 0:
                continue
            factor = X[k][i]
            X[k] = [a - factor * b for a, b in zip(X[k], X[i])]
            Y[k] = [a - factor * b for a, b in zip(Y[k], Y[i])]

    return rational_matrix(Y, n_cols=n)


def pseudo_inverse(B: RationalMatrix) -> RationalMatrix:
    """The pseudo-inverse ``(B^T B)^{-1} B^T`` of a matrix with independent
    columns.

    For square ``B`` this is ``invert(B)``.

    Raises
    ------
    DependentColumns
        If the columns of ``B`` are linearly dependent.
    """
    r, s = B.shape
    if rank(B) != s:
        raise DependentColumns(f"the {s} columns of the {r}x{s} matrix are "
                               "linearly dependent")
    if r == s:
        return invert(B)
    Bt = transpose(B)
    return matmul(invert(matmul(Bt, B)), Bt)


def inverse_gap_squared(B: RationalMatrix, delta_B: RationalMatrix,
                        N: int) -> Fraction:
    """``||(B + delta_B / N)^{-1} - B^{-1}||^2``.

    Raises
    ------
    SingularMatrix
        If ``B`` or the perturbed matrix is singular.
    """
    perturbed = rational_matrix(B + delta_B * Fraction(1, N))
    gap = invert(perturbed) - invert(B)
    return matrix_norm_squared(gap)


class SpanEchelon():
    """Immutable incremental echelon basis of a set of vectors.

    Each stored vector has a unit entry at its pivot position and zeros at
    the pivots of the vectors stored before it, so a vector lies in the span
    iff reducing it against the stored vectors in order leaves zero.

    Parameters
    ----------
    size:
        Length of the vectors.
    """

    def __init__(self, size: int, _rows: tuple = ()):
        self.size = size
        self._rows = _rows

    def __len__(self):
        return len(self._rows)

    def reduce(self, v: Sequence) -> List[Fraction]:
        """The residual of ``v`` after elimination against the basis."""
        v = [Fraction(x) for x in v]
        for pivot, row in self._rows:
            factor = v[pivot]
            if factor != 0:
                v = [a - factor * b for a, b in zip(v, row)]
        return v

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def extend(self, v: Sequence):
        """Return a new echelon with ``v`` added, or ``None`` if ``v`` is
        already in the span."""
        residual = self.reduce(v)
        pivot = next((i for i, x in enumerate(residual) if x != 0), None)
        if pivot is None:
            return None
        scale = residual[pivot]
        row = [x / scale for x in residual]
        return SpanEchelon(self.size, self._rows + ((pivot, row),))
