"""Dense primal simplex with Bland's anti-cycling rule.

Solves  min c . x  subject to  A x <= b, x >= 0,  for b >= 0, which is the
only form the library needs: a slack basis is then immediately feasible and
no phase-1 artificial variables are required. Bland's rule (always pick the
lowest-index eligible entering and leaving variable) makes cycling
impossible at the price of speed, which is irrelevant at desk scale.
"""
from __future__ import annotations

import numpy as np

from .errors import SolverError

_EPS = 1e-9


def solve_lp(c, A, b, max_pivots: int = 100_000):
    """Minimize c.x over {A x <= b, x >= 0}; returns (x, objective).

    Requires b >= 0 so that x = 0 is feasible. Raises SolverError on an
    unbounded objective or when the pivot budget is exhausted.
    """
    c = np.asarray(c, dtype=np.float64)
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    m, n = A.shape
    if b.shape != (m,) or c.shape != (n,):
        raise SolverError(f"shape mismatch: A {A.shape}, b {b.shape}, c {c.shape}")
    if np.any(b < 0):
        raise SolverError("right-hand side must be nonnegative")

    # Tableau layout: columns [structural (n) | slack (m) | rhs], one row per
    # constraint plus the objective row (reduced costs) at the bottom.
    tab = np.zeros((m + 1, n + m + 1), dtype=np.float64)
    tab[:m, :n] = A
    tab[:m, n : n + m] = np.eye(m)
    tab[:m, -1] = b
    tab[m, :n] = c
    basis = list(range(n, n + m))

    for _ in range(max_pivots):
        reduced = tab[m, :-1]
        entering = -1
        for j in range(n + m):
            if reduced[j] < -_EPS:
                entering = j  # Bland: first improving column
                break
        if entering == -1:
            break
        col = tab[:m, entering]
        best_ratio = None
        leaving_row = -1
        leaving_var = None
        for i in range(m):
            if col[i] > _EPS:
                ratio = tab[i, -1] / col[i]
                if (
                    best_ratio is None
                    or ratio < best_ratio - _EPS
                    or (abs(ratio - best_ratio) <= _EPS and basis[i] < leaving_var)
                ):
                    best_ratio = ratio
                    leaving_row = i
                    leaving_var = basis[i]
        if leaving_row == -1:
            raise SolverError("objective is unbounded below")
        pivot = tab[leaving_row, entering]
        tab[leaving_row] /= pivot
        for i in range(m + 1):
            if i != leaving_row and tab[i, entering] != 0.0:
                tab[i] -= tab[i, entering] * tab[leaving_row]
        basis[leaving_row] = entering
    else:
        raise SolverError(f"pivot budget {max_pivots} exhausted")

    x = np.zeros(n + m)
    for i, j in enumerate(basis):
        x[j] = tab[i, -1]
    return x[:n], float(-tab[m, -1])
