import itertools
import logging

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from ..errors import GoodCaseError
from ..model import build_sa_index
from .occupancy_lp import build_lp, check_initial
from .problem import LpProblem, LpSolution
from .simplex import solve_lp

logger = logging.getLogger(__name__)

CORNER_LIMIT = 256


class EpsLpProblem(object):
    """Robust occupancy LP over (x, kernels, rewards) in boxes of half
    width eps / total SA labels around the estimates.

    Attributes:
        problem (:obj:`LpProblem`): Occupancy LP at the estimated kernels
            and the optimistic rewards r_hat + delta.
        lower, upper (list[array]): Per-class entrywise kernel boxes
            clipped to [0, 1].
    """

    def __init__(self, inst, kernels, rewards, eps, x0, horizon,
                 initial='sa'):
        self.inst = inst
        self.sa_index = build_sa_index(inst)
        self.x0 = check_initial(x0, self.sa_index)
        self.horizon = int(horizon)
        self.initial = initial
        self.eps = float(eps)
        if self.eps < 0:
            raise ValueError('eps must be nonnegative')
        self.delta = self.eps / self.sa_index.total
        self.kernels = [np.asarray(k, dtype=np.float64) for k in kernels]
        for i, k in enumerate(self.kernels):
            if not np.isfinite(k).all():
                raise GoodCaseError(
                    'class {}: kernel estimate has unestimated rows'.format(i))
        self.rewards = [
            np.asarray(r, dtype=np.float64) + self.delta for r in rewards
        ]
        self.lower = [np.clip(k - self.delta, 0.0, 1.0) for k in self.kernels]
        self.upper = [np.clip(k + self.delta, 0.0, 1.0) for k in self.kernels]
        self.problem = self.with_kernels(self.kernels)

    def with_kernels(self, kernels):
        return build_lp(
            self.inst,
            self.x0,
            self.horizon,
            initial=self.initial,
            kernels=kernels,
            rewards=self.rewards,
            sa_index=self.sa_index)

    def row_vertices(self, i, a, s):
        """Vertices of {p : lower <= p <= upper, sum p = 1} for one row."""
        lo = self.lower[i][a, s]
        hi = self.upper[i][a, s]
        num_states = lo.size
        vertices = []
        for free in range(num_states):
            others = [k for k in range(num_states) if k != free]
            for corner in itertools.product((0, 1), repeat=len(others)):
                p = np.empty(num_states)
                for k, side in zip(others, corner):
                    p[k] = hi[k] if side else lo[k]
                p[free] = 1.0 - p[others].sum()
                if lo[free] - 1e-12 <= p[free] <= hi[free] + 1e-12:
                    p[free] = min(max(p[free], lo[free]), hi[free])
                    if not any(np.allclose(p, v, atol=1e-12)
                               for v in vertices):
                        vertices.append(p)
        return vertices

    def rows(self):
        return [(i, a, s) for i, cls in enumerate(self.inst.classes)
                for a in range(cls.action_count)
                for s in range(cls.state_count)]


def build_eps_lp(inst, kernels, rewards, eps, x0, horizon, initial='sa'):
    """Robust (eps, x0) occupancy LP around estimated kernels and rewards."""
    return EpsLpProblem(inst, kernels, rewards, eps, x0, horizon, initial)


def _substitute(kernels, row, p):
    i, a, s = row
    out = [k.copy() for k in kernels]
    out[i][a, s] = p
    return out


def lifted_relaxation(eps_problem):
    """LP whose optimum bounds the robust optimum from above.

    Each product x_{iota,t} p(iota, s') becomes a variable y bounded by
    lower * x <= y <= upper * x and summing to x over s'; the kernel may
    then differ per time slice, which only enlarges the feasible set.
    """
    base = eps_problem.problem
    sa_index = eps_problem.sa_index
    total = sa_index.total
    horizon = eps_problem.horizon
    num_x = base.num_vars
    widths = [sa_index.state_counts[sa_index.class_of[iota]]
              for iota in range(total)]
    y_offsets = np.concatenate([[0], np.cumsum(widths)])
    per_slice = int(y_offsets[-1])
    num_y = per_slice * horizon
    num_vars = num_x + num_y

    def y_index(t, iota, s_next):
        return num_x + t * per_slice + y_offsets[iota] + s_next

    rows, rhs, senses, row_names = [], [], [], []
    flow_rows = [k for k, name in enumerate(base.row_names)
                 if name.startswith('flow_')]
    for k in range(base.num_rows):
        if k in flow_rows:
            continue
        row = np.zeros(num_vars)
        row[:num_x] = base.A[k]
        rows.append(row)
        rhs.append(base.b[k])
        senses.append(base.senses[k])
        row_names.append(base.row_names[k])
    for t in range(horizon):
        for i, cls in enumerate(eps_problem.inst.classes):
            block = sa_index.class_block(i)
            for s_next in range(cls.state_count):
                row = np.zeros(num_vars)
                for iota in range(block.start, block.stop):
                    row[y_index(t, iota, s_next)] = 1.0
                for a in range(cls.action_count):
                    row[(t + 1) * total + sa_index.index(i, s_next, a)] = -1.0
                rows.append(row)
                rhs.append(0.0)
                senses.append('eq')
                row_names.append('flow_t{}_c{}_s{}'.format(t, i, s_next))
        for iota in range(total):
            i, s, a = sa_index.label(iota)
            row = np.zeros(num_vars)
            row[t * total + iota] = -1.0
            for s_next in range(widths[iota]):
                row[y_index(t, iota, s_next)] = 1.0
            rows.append(row)
            rhs.append(0.0)
            senses.append('eq')
            row_names.append('split_t{}_i{}'.format(t, iota))
            for s_next in range(widths[iota]):
                lo = eps_problem.lower[i][a, s, s_next]
                hi = eps_problem.upper[i][a, s, s_next]
                for sign, coef, tag in ((1.0, -hi, 'hi'), (-1.0, lo, 'lo')):
                    row = np.zeros(num_vars)
                    row[y_index(t, iota, s_next)] = sign
                    row[t * total + iota] = coef
                    rows.append(row)
                    rhs.append(0.0)
                    senses.append('le')
                    row_names.append('box{}_t{}_i{}_s{}'.format(
                        tag, t, iota, s_next))
    c = np.concatenate([base.c, np.zeros(num_y)])
    bounds = np.concatenate(
        [base.bounds, np.tile([0.0, 1.0], (num_y, 1))])
    names = list(base.names) + [
        'y_t{}_i{}_s{}'.format(t, iota, s_next) for t in range(horizon)
        for iota in range(total) for s_next in range(widths[iota])
    ]
    return LpProblem(
        c,
        np.array(rows),
        rhs,
        senses=senses,
        bounds=bounds,
        sense='max',
        names=names,
        row_names=row_names,
        meta=dict(base.meta))


def _project_row(p, lo, hi):
    """Closest-shift point of the row box {lo <= q <= hi, sum q = 1}."""

    def excess(tau):
        return np.clip(p + tau, lo, hi).sum() - 1.0

    if abs(excess(0.0)) <= 1e-12:
        return np.clip(p, lo, hi)
    tau = brentq(excess, -1.0, 1.0, xtol=1e-14)
    return np.clip(p + tau, lo, hi)


def relaxed_kernels(eps_problem, relaxed):
    """Kernels implied by the lifted optimum, p = sum_t y / sum_t x.

    Rows never visited by the relaxation keep the estimate. When the
    relaxation keeps one kernel over time the implied kernels are exact.
    """
    sa_index = eps_problem.sa_index
    total = sa_index.total
    horizon = eps_problem.horizon
    values = relaxed.x_float()
    num_x = eps_problem.problem.num_vars
    widths = [sa_index.state_counts[sa_index.class_of[iota]]
              for iota in range(total)]
    y_offsets = np.concatenate([[0], np.cumsum(widths)]).astype(np.int64)
    per_slice = int(y_offsets[-1])
    kernels = [k.copy() for k in eps_problem.kernels]
    for iota in range(total):
        i, s, a = sa_index.label(iota)
        mass = sum(values[t * total + iota] for t in range(horizon))
        if mass <= 1e-12:
            continue
        flows = np.zeros(widths[iota])
        for t in range(horizon):
            start = num_x + t * per_slice + y_offsets[iota]
            flows += values[start:start + widths[iota]]
        kernels[i][a, s] = _project_row(flows / mass,
                                        eps_problem.lower[i][a, s],
                                        eps_problem.upper[i][a, s])
    return kernels


def solve_eps_lp(eps_problem,
                 exact=False,
                 corner_limit=CORNER_LIMIT,
                 max_rounds=50,
                 ascent_rounds=3,
                 bound=True,
                 warm_start=None):
    """Best kernels in the boxes and the matching occupancy LP optimum.

    Candidates are the estimates, the kernels implied by the lifted
    relaxation and, if given, ``warm_start`` projected on the boxes.
    Kernel rows are then moved to vertices of their boxes: all vertex
    combinations when there are at most ``corner_limit`` of them,
    otherwise coordinate ascent row by row. A final continuous ascent
    line-searches every row toward its vertices and its relaxed value,
    which reaches optima strictly inside the boxes. With ``eps = 0``
    this is the plain occupancy LP at the estimates.

    Returns:
        :obj:`LpSolution`: Carries the chosen ``kernels``, the optimistic
        ``rewards`` and the ``upper_bound`` of the lifted relaxation.
    """
    if eps_problem.eps == 0:
        solution = solve_lp(eps_problem.problem, exact=exact)
        return _attach(solution, eps_problem, eps_problem.kernels,
                       solution.objective if solution.is_optimal else None)

    def evaluate(kernels):
        solution = solve_lp(eps_problem.with_kernels(kernels), exact=exact)
        return solution if solution.is_optimal else None

    def better(candidate):
        return candidate is not None and (
            best is None or candidate.objective > best.objective + 1e-12)

    best_kernels = [k.copy() for k in eps_problem.kernels]
    best = evaluate(best_kernels)
    rows = eps_problem.rows()

    relaxed = solve_lp(lifted_relaxation(eps_problem), exact=exact)
    upper_bound = relaxed.objective if relaxed.is_optimal else None
    implied = None
    starts = []
    if relaxed.is_optimal:
        implied = relaxed_kernels(eps_problem, relaxed)
        starts.append(implied)
    if warm_start is not None:
        starts.append([
            np.array([[
                _project_row(
                    np.asarray(k, dtype=np.float64)[a, s],
                    eps_problem.lower[i][a, s], eps_problem.upper[i][a, s])
                for s in range(k.shape[1])
            ] for a in range(k.shape[0])]) for i, k in enumerate(warm_start)
        ])
    for kernels in starts:
        candidate = evaluate(kernels)
        if better(candidate):
            best, best_kernels = candidate, kernels

    vertices = [eps_problem.row_vertices(*row) for row in rows]
    combos = int(np.prod([len(v) for v in vertices]))
    if combos <= corner_limit:
        for choice in itertools.product(*vertices):
            kernels = [k.copy() for k in eps_problem.kernels]
            for (i, a, s), p in zip(rows, choice):
                kernels[i][a, s] = p
            candidate = evaluate(kernels)
            if better(candidate):
                best, best_kernels = candidate, kernels
    else:
        for round_ in range(max_rounds):
            improved = False
            for row, options in zip(rows, vertices):
                for p in options:
                    kernels = _substitute(best_kernels, row, p)
                    candidate = evaluate(kernels)
                    if better(candidate):
                        best, best_kernels = candidate, kernels
                        improved = True
            if not improved:
                break
        logger.debug('coordinate ascent stopped after %d rounds', round_ + 1)

    for round_ in range(ascent_rounds):
        if best is None:
            break
        improved = False
        for row, options in zip(rows, vertices):
            i, a, s = row
            targets = list(options)
            if implied is not None:
                targets.append(implied[i][a, s])
            for target in targets:
                start = best_kernels[i][a, s].copy()
                if np.allclose(start, target, atol=1e-12):
                    continue

                def loss(lam):
                    candidate = evaluate(
                        _substitute(best_kernels, row,
                                    (1.0 - lam) * start + lam * target))
                    return np.inf if candidate is None else -float(
                        candidate.objective)

                result = minimize_scalar(
                    loss, bounds=(0.0, 1.0), method='bounded',
                    options=dict(xatol=1e-7))
                kernels = _substitute(
                    best_kernels, row,
                    (1.0 - result.x) * start + result.x * target)
                candidate = evaluate(kernels)
                if better(candidate):
                    best, best_kernels = candidate, kernels
                    improved = True
        if not improved:
            break

    if best is None:
        return _attach(
            LpSolution('infeasible', problem=eps_problem.problem),
            eps_problem, best_kernels, upper_bound if bound else None)
    return _attach(best, eps_problem, best_kernels,
                   upper_bound if bound else None)


def solve_eps_path(inst, kernels, rewards, eps_values, x0, horizon,
                   initial='sa', **kwargs):
    """Robust LPs over increasing eps, each warm-started at the previous
    optimum.

    The boxes grow with eps and the optimistic reward shift is the same
    for every SA pair, so the previous kernels stay feasible and the
    optimum never decreases along the path.

    Returns:
        list[:obj:`LpSolution`]: One solution per eps, in ascending order.
    """
    solutions = []
    warm_start = None
    for eps in sorted(float(e) for e in eps_values):
        problem = build_eps_lp(inst, kernels, rewards, eps, x0, horizon,
                               initial=initial)
        solution = solve_eps_lp(problem, warm_start=warm_start, **kwargs)
        if solution.is_optimal:
            warm_start = solution.kernels
        solutions.append(solution)
    return solutions


def _attach(solution, eps_problem, kernels, upper_bound):
    solution.kernels = kernels
    solution.rewards = eps_problem.rewards
    solution.upper_bound = upper_bound
    return solution
