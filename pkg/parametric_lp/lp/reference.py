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
Floating point cross-check of the exact solver.
For now we just wrap ``scipy.optimize.linprog``. Nothing in here is exact, so
it is only ever used to compare against ``solver.solve`` in tests.
"""

from typing import Optional, Tuple

import numpy as np
from scipy.optimize import linprog

from parametric_lp.lp.problem import LpProblem

# scipy's status codes
_STATUS = {0: "optimal", 2: "infeasible", 3: "unbounded"}


def linprog_reference(problem: LpProblem,
                      method: str = "highs",
                      **linprog_kwargs) -> Tuple[str, Optional[float]]:
    """A ``scipy.optimize.linprog`` wrapper for standard form maximization.

    Parameters
    ----------
    problem:
        The LP problem ``max p^T x s.t. Ax = b, x >= 0``.
    method:
        The ``linprog`` method. Default is ``"highs"``.
    linprog_kwargs:
        The keyword arguments passed forward to ``scipy.optimize.linprog``.

    Returns
    -------
    Tuple[str, Optional[float]]:
        The status (``"optimal"``, ``"infeasible"``, ``"unbounded"`` or
        ``"failed"``) and the optimal value as a float, ``None`` unless
        optimal.
    """
    c = -np.array(problem.p, dtype=float)
    A_eq = np.array(problem.A, dtype=float)
    b_eq = np.array(problem.b, dtype=float)
    out = linprog(c, A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method=method,
                  **linprog_kwargs)
    status = _STATUS.get(out.status, "failed")
    if status != "optimal":
        return status, None
    return status, -out.fun
