"""Dense two-phase primal simplex in floating or exact rational arithmetic.

The problem is brought to ``min c y, A y = b, y >= 0, b >= 0`` by shifting
bounded variables, splitting free ones, adding upper bound and slack rows;
every row then gets an artificial column for phase one.
"""
import logging
from fractions import Fraction

import numpy as np

from ..errors import NonConvergenceError
from .problem import LpSolution

logger = logging.getLogger(__name__)


def _fraction(value):
    return Fraction(str(float(value)))


def _implied_upper(problem):
    """Variables whose upper bound follows from a nonnegative equality row."""
    lower = problem.bounds[:, 0]
    upper = problem.bounds[:, 1]
    implied = np.zeros(problem.num_vars, dtype=bool)
    for k in range(problem.num_rows):
        if problem.senses[k] != 'eq':
            continue
        row = problem.A[k]
        support = row != 0
        if (row < 0).any() or not np.isfinite(lower[support]).all():
            continue
        floor = float(row[support] @ lower[support])
        for j in np.flatnonzero(support):
            bound = (problem.b[k] - floor + row[j] * lower[j]) / row[j]
            if bound <= upper[j] + 1e-12:
                implied[j] = True
    return implied


class _Standardized(object):
    """Standard form of an :obj:`LpProblem` and the map back to x."""

    def __init__(self, problem, num, dtype):
        lower, upper = problem.bounds[:, 0], problem.bounds[:, 1]
        implied = _implied_upper(problem)
        self.offset = [num(0)] * problem.num_vars
        self.columns = []
        self.names = []
        upper_rows = []
        for j in range(problem.num_vars):
            lo, hi = lower[j], upper[j]
            name = problem.names[j]
            if lo == hi:
                self.offset[j] = num(lo)
            elif np.isfinite(lo):
                self.offset[j] = num(lo)
                self.columns.append((j, 1))
                self.names.append(name)
                if np.isfinite(hi) and not implied[j]:
                    upper_rows.append((len(self.columns) - 1, num(hi - lo),
                                       name))
            elif np.isfinite(hi):
                self.offset[j] = num(hi)
                self.columns.append((j, -1))
                self.names.append('-' + name)
            else:
                self.columns.append((j, 1))
                self.names.append(name)
                self.columns.append((j, -1))
                self.names.append('-' + name)

        num_struct = len(self.columns)
        num_slack = sum(s == 'le' for s in problem.senses) + len(upper_rows)
        num_rows = problem.num_rows + len(upper_rows)
        self.num_struct = num_struct
        self.num_cols = num_struct + num_slack
        A = np.empty((num_rows, self.num_cols), dtype=dtype)
        A[:] = num(0)
        b = np.empty(num_rows, dtype=dtype)
        slack = num_struct
        for k in range(problem.num_rows):
            row = [num(v) for v in problem.A[k]]
            shift = sum((row[j] * self.offset[j]
                         for j in range(problem.num_vars)), num(0))
            b[k] = num(problem.b[k]) - shift
            for col, (j, sign) in enumerate(self.columns):
                A[k, col] = row[j] * sign
            if problem.senses[k] == 'le':
                A[k, slack] = num(1)
                self.names.append('slack:' + problem.row_names[k])
                slack += 1
        for offset, (col, width, name) in enumerate(upper_rows):
            k = problem.num_rows + offset
            A[k, col] = num(1)
            A[k, slack] = num(1)
            b[k] = width
            self.names.append('slack:ub:' + name)
            slack += 1
        negative = np.array([v < 0 for v in b], dtype=bool)
        A[negative] = -A[negative]
        b[negative] = -b[negative]
        self.A = A
        self.b = b

        sign = 1 if problem.sense == 'min' else -1
        cost = np.empty(self.num_cols, dtype=dtype)
        cost[:] = num(0)
        for col, (j, s) in enumerate(self.columns):
            cost[col] = num(problem.c[j]) * s * sign
        self.cost = cost

    def recover(self, y):
        x = list(self.offset)
        for col, (j, sign) in enumerate(self.columns):
            x[j] = x[j] + sign * y[col]
        return x


class _Tableau(object):

    def __init__(self, A, b, tol, bland_after, max_iter):
        num_rows, num_cols = A.shape
        table = np.empty((num_rows + 1, num_cols + num_rows + 1),
                         dtype=A.dtype)
        table[:-1, :num_cols] = A
        table[:-1, num_cols:-1] = 0
        for k in range(num_rows):
            table[k, num_cols + k] = 1
        table[:-1, -1] = b
        self.table = table
        self.basis = list(range(num_cols, num_cols + num_rows))
        self.art_start = num_cols
        self.tol = tol
        self.bland_after = bland_after
        self.max_iter = max_iter
        self.iterations = 0

    @property
    def rows(self):
        return self.table.shape[0] - 1

    def pivot(self, r, c):
        table = self.table
        table[r] = table[r] / table[r, c]
        col = table[:, c].copy()
        col[r] = 0
        table -= np.multiply.outer(col, table[r])
        table[:, c] = 0
        table[r, c] = 1
        if self.tol:
            rhs = table[:-1, -1].astype(np.float64)
            rhs[np.abs(rhs) < self.tol] = 0.0
            table[:-1, -1] = rhs
        self.basis[r] = c

    def run(self, allowed):
        """Pivot to optimality over ``allowed`` columns.

        Returns:
            bool: False when an entering column has no leaving row.
        """
        tol = self.tol
        degenerate = 0
        bland = False
        table = self.table
        while True:
            reduced = table[-1, allowed]
            entering = [c for c, d in zip(allowed, reduced) if d < -tol]
            if not entering:
                return True
            if bland:
                c = min(entering)
            else:
                c = min(entering, key=lambda j: (table[-1, j], j))
            column = self.table[:-1, c]
            rows = [k for k in range(self.rows) if column[k] > tol]
            if not rows:
                return False
            ratios = [table[k, -1] / column[k] for k in rows]
            best = min(ratios)
            ties = [k for k, v in zip(rows, ratios) if v <= best + tol]
            r = min(ties, key=lambda k: self.basis[k])
            if best <= tol:
                degenerate += 1
                if degenerate >= self.bland_after and not bland:
                    logger.debug('switching to Bland rule after %d '
                                 'degenerate pivots', degenerate)
                    bland = True
            else:
                degenerate = 0
            self.pivot(r, c)
            self.iterations += 1
            if self.iterations > self.max_iter:
                raise NonConvergenceError(
                    'simplex exceeded {} pivots'.format(self.max_iter))

    def drop_rows(self, rows):
        keep = [k for k in range(self.rows) if k not in rows]
        self.table = self.table[keep + [self.rows]]
        self.basis = [self.basis[k] for k in keep]


def solve_lp(problem, exact=False, tol=1e-9, max_iter=50000,
             bland_after=50):
    """Solve an :obj:`LpProblem` by the two-phase primal simplex.

    Entering columns follow Dantzig's rule until ``bland_after``
    consecutive degenerate pivots, then Bland's rule. Leaving rows are
    chosen by the minimum ratio with the lowest basic column on ties.

    Args:
        problem (:obj:`LpProblem`): The program.
        exact (bool): Rational arithmetic with :obj:`fractions.Fraction`
            (data are read through their decimal representation).
        tol (float): Pivot and feasibility tolerance of float mode.

    Returns:
        :obj:`LpSolution`: Optimal vertex or an infeasible/unbounded
        status.
    """
    num = _fraction if exact else float
    tol = 0 if exact else tol
    std = _Standardized(problem, num, object if exact else np.float64)
    tableau = _Tableau(std.A, std.b, tol, bland_after, max_iter)
    table = tableau.table
    num_cols = std.num_cols

    # phase one: minimize the sum of artificials
    table[-1, :] = 0
    for k in range(tableau.rows):
        table[-1, :num_cols] -= table[k, :num_cols]
        table[-1, -1] -= table[k, -1]
    tableau.run(list(range(num_cols + tableau.rows)))
    table = tableau.table
    infeasibility = -table[-1, -1]
    scale = max([1.0] + [abs(float(v)) for v in std.b])
    if infeasibility > tol * scale:
        logger.debug('phase one ended with infeasibility %s', infeasibility)
        return LpSolution(
            'infeasible', iterations=tableau.iterations, problem=problem)

    redundant = []
    for k in range(tableau.rows):
        if tableau.basis[k] < tableau.art_start:
            continue
        candidates = [
            c for c in range(num_cols) if abs(tableau.table[k, c]) > tol
        ]
        if candidates:
            tableau.pivot(k, candidates[0])
        else:
            redundant.append(k)
    if redundant:
        logger.debug('dropping %d redundant rows', len(redundant))
        tableau.drop_rows(redundant)

    # phase two on the structural and slack columns
    table = np.concatenate(
        [tableau.table[:, :num_cols], tableau.table[:, -1:]], axis=1)
    tableau.table = table
    table[-1, :] = 0
    table[-1, :num_cols] = std.cost
    for k, col in enumerate(tableau.basis):
        if std.cost[col] != 0:
            table[-1] -= std.cost[col] * table[k]
    bounded = tableau.run(list(range(num_cols)))
    if not bounded:
        return LpSolution(
            'unbounded', iterations=tableau.iterations, problem=problem)

    y = [num(0)] * num_cols
    for k, col in enumerate(tableau.basis):
        y[col] = tableau.table[k, -1]
    x = std.recover(y)
    objective = sum((num(problem.c[j]) * x[j] for j in range(len(x))),
                    num(0))
    x = np.array(x, dtype=object if exact else np.float64)
    basis = sorted(std.names[col] for col in tableau.basis)
    logger.debug('simplex optimal after %d pivots, objective %s',
                 tableau.iterations, objective)
    return LpSolution(
        'optimal',
        x=x,
        objective=objective,
        basis=basis,
        iterations=tableau.iterations,
        problem=problem)
