from fractions import Fraction

import mmcv
import numpy as np

from ..errors import InfeasibleError, UnboundedError

ROW_SENSES = ('eq', 'le')
STATUSES = ('optimal', 'infeasible', 'unbounded')


class LpProblem(object):
    """A linear program ``max (or min) c x`` s.t. ``A x (= | <=) b``, bounds.

    Args:
        c (array): Objective coefficients.
        A (array): Constraint matrix.
        b (array): Right hand sides.
        senses (list[str]): 'eq' or 'le' per row.
        bounds (array, optional): (n, 2) lower and upper bounds, inf
            allowed; [0, inf) by default.
        sense (str): 'max' or 'min'.
        names (list[str], optional): Variable names.
        row_names (list[str], optional): Row names.
        meta (dict, optional): Context of the builder (instance, labeling,
            horizon) used to read solutions back.
    """

    def __init__(self,
                 c,
                 A,
                 b,
                 senses=None,
                 bounds=None,
                 sense='max',
                 names=None,
                 row_names=None,
                 meta=None):
        self.c = np.asarray(c, dtype=np.float64)
        self.A = np.asarray(A, dtype=np.float64).reshape(-1, self.c.size)
        self.b = np.asarray(b, dtype=np.float64).reshape(-1)
        num_rows, num_vars = self.A.shape
        self.senses = list(senses) if senses is not None else ['eq'] * (
            num_rows)
        if self.b.size != num_rows or len(self.senses) != num_rows:
            raise ValueError('A, b and senses must have {} rows'.format(
                num_rows))
        for s in self.senses:
            if s not in ROW_SENSES:
                raise ValueError('row sense must be one of {}, got {}'.format(
                    ROW_SENSES, s))
        if bounds is None:
            bounds = np.tile([0.0, np.inf], (num_vars, 1))
        self.bounds = np.asarray(bounds, dtype=np.float64).reshape(
            num_vars, 2)
        if sense not in ('max', 'min'):
            raise ValueError('sense must be max or min')
        self.sense = sense
        self.names = names or ['x{}'.format(j) for j in range(num_vars)]
        self.row_names = row_names or ['r{}'.format(k) for k in range(
            num_rows)]
        self.meta = meta or dict()

    def __repr__(self):
        return '{}(vars={}, rows={}, sense={})'.format(
            self.__class__.__name__, self.num_vars, self.num_rows, self.sense)

    @property
    def num_vars(self):
        return self.c.size

    @property
    def num_rows(self):
        return self.b.size

    def residuals(self, x):
        return self.A @ np.asarray(x, dtype=np.float64) - self.b

    def max_violation(self, x):
        """Largest violation of a row or bound by ``x``."""
        x = np.asarray(x, dtype=np.float64)
        res = self.residuals(x)
        eq = np.array([s == 'eq' for s in self.senses], dtype=bool)
        rows = np.where(eq, np.abs(res), np.maximum(res, 0.0))
        lower = np.maximum(self.bounds[:, 0] - x, 0.0)
        upper = np.maximum(x - self.bounds[:, 1], 0.0)
        return float(max(rows.max(initial=0.0), lower.max(initial=0.0),
                         upper.max(initial=0.0)))

    def to_text(self):
        """Fixed-format dump: objective, rows and bounds, one per line."""

        def terms(coefs):
            return ' '.join('{:+.12g} {}'.format(v, self.names[j])
                            for j, v in enumerate(coefs) if v != 0)

        lines = ['{} {}'.format(self.sense.upper(), terms(self.c) or '0')]
        lines.append('SUBJECT TO')
        for k in range(self.num_rows):
            op = '=' if self.senses[k] == 'eq' else '<='
            lines.append('  {:<16s} {} {} {:.12g}'.format(
                self.row_names[k] + ':', terms(self.A[k]) or '0', op,
                self.b[k]))
        lines.append('BOUNDS')
        for j, (lo, hi) in enumerate(self.bounds):
            lines.append('  {:.12g} <= {} <= {:.12g}'.format(
                lo, self.names[j], hi))
        lines.append('END')
        return '\n'.join(lines) + '\n'

    def dump_text(self, filename):
        with open(filename, 'w') as f:
            f.write(self.to_text())


class LpSolution(object):
    """Outcome of :func:`solve_lp`.

    ``basis`` names the basic columns of the final tableau; together with
    ``x`` it certifies the vertex. Robust solutions additionally carry the
    chosen ``kernels`` and ``rewards`` and a relaxation ``upper_bound``.
    """

    def __init__(self,
                 status,
                 x=None,
                 objective=None,
                 basis=None,
                 iterations=0,
                 problem=None,
                 kernels=None,
                 rewards=None,
                 upper_bound=None):
        if status not in STATUSES:
            raise ValueError('status must be one of {}'.format(STATUSES))
        self.status = status
        self.x = x
        self.objective = objective
        self.basis = list(basis or [])
        self.iterations = iterations
        self.problem = problem
        self.kernels = kernels
        self.rewards = rewards
        self.upper_bound = upper_bound

    def __repr__(self):
        return '{}(status={}, objective={})'.format(
            self.__class__.__name__, self.status, self.objective)

    @property
    def is_optimal(self):
        return self.status == 'optimal'

    def check(self):
        """Raise the status error unless the solution is optimal."""
        if self.status == 'infeasible':
            raise InfeasibleError('linear program is infeasible')
        if self.status == 'unbounded':
            raise UnboundedError('linear program is unbounded')
        return self

    def x_float(self):
        return np.array([float(v) for v in self.x])

    def slices(self):
        """x reshaped to (T + 1, SA labels) for occupancy problems."""
        meta = self.problem.meta
        return self.x_float().reshape(meta['horizon'] + 1,
                                      meta['sa_index'].total)

    def to_dict(self):
        def plain(v):
            return str(v) if isinstance(v, Fraction) else float(v)

        out = dict(
            status=self.status,
            objective=None if self.objective is None else plain(
                self.objective),
            x=None if self.x is None else [plain(v) for v in self.x],
            basis=self.basis,
            iterations=self.iterations)
        if self.kernels is not None:
            out['kernels'] = [np.asarray(k).tolist() for k in self.kernels]
            out['rewards'] = [np.asarray(r).tolist() for r in self.rewards]
            out['upper_bound'] = self.upper_bound
        return out

    def dump(self, filename):
        mmcv.dump(self.to_dict(), filename, indent=2)
