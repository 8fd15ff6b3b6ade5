import numpy as np

from ..errors import CoverageError
from ..model import build_sa_index
from .qtable import solve_q_fixed_point


def default_thresholds(inst, sa_index=None):
    """0.5 / (h * sum N0 * labels): any single arm clears its threshold."""
    sa_index = sa_index or build_sa_index(inst)
    value = 0.5 / (inst.scale * inst.base_counts.sum() * sa_index.total)
    return np.full(sa_index.total, value)


class EstimatedModel(object):
    """Empirical kernels and per-channel rewards, frozen at coverage.

    Args:
        inst (:obj:`WcgInstance`): Instance whose shapes are estimated.
        channels (list[str]): Reward channel names (one per distinct
            reward spec of the learning processes).
        running_average (bool): Accumulate counts across steps instead of
            overwriting rows with the latest covering step.
    """

    def __init__(self, inst, channels=('reward', ), running_average=False):
        self.inst = inst
        self.sa_index = build_sa_index(inst)
        self.running_average = running_average
        self.kernels = [
            np.full(c.kernels.shape, np.nan) for c in inst.classes
        ]
        self.rewards = {
            name: [np.full(c.rewards.shape, np.nan) for c in inst.classes]
            for name in channels
        }
        self._visit_totals = [np.zeros(c.rewards.shape) for c in inst.classes]
        self._successor_totals = [
            np.zeros(c.kernels.shape) for c in inst.classes
        ]
        self._reward_totals = {
            name: [np.zeros(c.rewards.shape) for c in inst.classes]
            for name in channels
        }
        self.last_update = np.full(self.sa_index.total, -1, dtype=np.int64)
        self.covered = np.zeros(self.sa_index.total, dtype=bool)
        self.stop_time = None

    @property
    def channels(self):
        return list(self.rewards.keys())

    @property
    def frozen(self):
        return self.stop_time is not None

    def is_estimated(self, i, a, s):
        return bool(np.isfinite(self.kernels[i][a, s]).all())

    def unestimated_rows(self):
        rows = []
        for i, kernel in enumerate(self.kernels):
            for a, s in zip(*np.nonzero(~np.isfinite(kernel).all(axis=2))):
                rows.append((i, int(a), int(s)))
        return rows

    def kernel_error(self):
        """Largest l-inf error of an estimated row against the truth."""
        error = 0.0
        for cls, kernel in zip(self.inst.classes, self.kernels):
            rows = np.isfinite(kernel).all(axis=2)
            if rows.any():
                error = max(error,
                            np.abs(kernel[rows] - cls.kernels[rows]).max())
        return float(error)

    def good_case(self):
        """Every positive true probability has a positive estimate."""
        for cls, kernel in zip(self.inst.classes, self.kernels):
            if not np.isfinite(kernel).all():
                return False
            if ((cls.kernels > 0) & (kernel <= 0)).any():
                return False
        return True

    def reward_matrix(self, channel, i):
        return self.rewards[channel][i]


def update_estimates(est, counts, reward_sums, occupancy, thresholds=None,
                     t=None):
    """Refresh the estimates of every SA label above its threshold.

    Rows are overwritten with the step's empirical frequencies and sample
    means (or accumulated when ``running_average`` is set). Once every
    label has been covered the model freezes and records its stop time;
    later calls return it untouched.

    Args:
        est (:obj:`EstimatedModel`): Model, updated in place.
        counts (:obj:`TransitionCounts`): Counts of the live step.
        reward_sums (dict): Channel name to per-class (|S|, |A|) sums.
        occupancy (array): Z(t).
        thresholds (array, optional): Per-label thresholds, the defaults
            of :func:`default_thresholds` when omitted.
        t (int, optional): Time stamp, ``counts.t`` by default.
    """
    if est.frozen:
        return est
    t = counts.t if t is None else t
    if thresholds is None:
        thresholds = default_thresholds(est.inst, est.sa_index)
    occupancy = np.asarray(occupancy)
    sa_index = est.sa_index
    for iota in np.flatnonzero(occupancy > thresholds):
        i, s, a = sa_index.label(iota)
        visits = counts.visits[i][s, a]
        if visits <= 0:
            continue
        successors = counts.successors[i][s, a]
        if est.running_average:
            est._visit_totals[i][s, a] += visits
            est._successor_totals[i][a, s] += successors
            visits_used = est._visit_totals[i][s, a]
            est.kernels[i][a, s] = est._successor_totals[i][a, s] / visits_used
            for name, sums in reward_sums.items():
                est._reward_totals[name][i][s, a] += sums[i][s, a]
                est.rewards[name][i][s, a] = (
                    est._reward_totals[name][i][s, a] / visits_used)
        else:
            est.kernels[i][a, s] = successors / float(visits)
            for name, sums in reward_sums.items():
                est.rewards[name][i][s, a] = sums[i][s, a] / float(visits)
        est.last_update[iota] = t
        est.covered[iota] = True
    if est.covered.all():
        est.stop_time = t
    return est


def stimulate(qtable, est, tol=1e-10, max_iter=100000):
    """Jump-start every process with the fixed point of the estimated model.

    Each process's Q-factors are replaced by the span-stopped value
    iteration fixed point of the taboo operator built from the frozen
    kernel and reward estimates, starting from the current estimates.
    """
    if not est.frozen:
        raise CoverageError('estimates are not frozen yet')
    tables = []
    for k, spec in enumerate(qtable.rewards):
        per_class = []
        for i, cls in enumerate(est.inst.classes):
            if spec.kind == 'live':
                rewards = est.reward_matrix(spec.name, i)
            else:
                rewards = spec.matrices[i]
            result = solve_q_fixed_point(
                cls,
                qtable.policies[k][i],
                rewards,
                kernel=est.kernels[i],
                q0=qtable.tables[k][i],
                tol=tol,
                max_iter=max_iter)
            per_class.append(result.q)
        tables.append(per_class)
    return qtable.replace(tables=tables)
