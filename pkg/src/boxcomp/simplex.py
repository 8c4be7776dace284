"""Dense two-phase simplex for small equality-form linear programs.

Solves  min c.x  subject to  A x = b, x >= 0.  Sized for problems with tens
of rows and ~100 columns; Bland's rule keeps it cycle-free, and redundant
constraint rows (the polytope descriptions here are rank-deficient) are
dropped after phase 1.
"""

from __future__ import annotations

import numpy as np

from .errors import Infeasible, NumericalError

PIVOT_TOL = 1e-10


def _pivot(tableau, basis, row, col):
    tableau[row] /= tableau[row, col]
    colvals = tableau[:, col].copy()
    colvals[row] = 0.0
    tableau -= np.outer(colvals, tableau[row])
    basis[row] = col


def _run(tableau, basis, ncols, max_iter):
    """Bland-rule pivoting until no reduced cost is negative. Entering columns < ncols."""
    for _ in range(max_iter):
        reduced = tableau[-1, :ncols]
        candidates = np.nonzero(reduced < -PIVOT_TOL)[0]
        if candidates.size == 0:
            return
        col = int(candidates[0])
        colvals = tableau[:-1, col]
        rows = np.nonzero(colvals > PIVOT_TOL)[0]
        if rows.size == 0:
            raise NumericalError("unbounded direction in a bounded polytope")
        ratios = tableau[rows, -1] / colvals[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12]
        row = int(min(ties, key=lambda i: basis[i]))
        _pivot(tableau, basis, row, col)
    raise NumericalError(f"simplex did not converge in {max_iter} pivots")


def solve_lp(c, a_eq, b_eq, tol=1e-9, max_iter=20000):
    """Minimize c.x over A x = b, x >= 0; returns (x, objective).

    Raises Infeasible when no nonnegative solution fits b within tol, and
    NumericalError on convergence failure.
    """
    a = np.array(a_eq, dtype=np.float64)
    b = np.array(b_eq, dtype=np.float64)
    cost = np.asarray(c, dtype=np.float64)
    m, n = a.shape
    flip = b < 0.0
    a[flip] *= -1.0
    b[flip] *= -1.0

    # phase 1: artificial basis, minimize the artificials' total
    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = a
    tableau[:m, n:n + m] = np.eye(m)
    tableau[:m, -1] = b
    tableau[m, :n] = -a.sum(axis=0)
    tableau[m, -1] = -b.sum()
    basis = list(range(n, n + m))
    _run(tableau, basis, n, max_iter)
    if -tableau[m, -1] > tol:
        raise Infeasible(f"phase-1 residual {-tableau[m, -1]:.3e} exceeds {tol:.1e}")

    # drive leftover artificials out of the basis; rows that offer no pivot
    # are linear combinations of others and get dropped
    drop = []
    for i in range(m):
        if basis[i] < n:
            continue
        row = tableau[i, :n]
        pivots = np.nonzero(np.abs(row) > PIVOT_TOL)[0]
        if pivots.size:
            _pivot(tableau, basis, i, int(pivots[0]))
        else:
            drop.append(i)
    if drop:
        keep = [i for i in range(m) if i not in drop]
        tableau = tableau[keep + [m]]
        basis = [basis[i] for i in keep]

    # phase 2 on the original columns
    rows = len(basis)
    phase2 = np.zeros((rows + 1, n + 1))
    phase2[:rows, :n] = tableau[:rows, :n]
    phase2[:rows, -1] = tableau[:rows, -1]
    phase2[rows, :n] = cost
    for i, var in enumerate(basis):
        phase2[rows] -= cost[var] * phase2[i]
    _run(phase2, basis, n, max_iter)

    x = np.zeros(n)
    for i, var in enumerate(basis):
        x[var] = max(phase2[i, -1], 0.0)
    return x, float(cost @ x)
