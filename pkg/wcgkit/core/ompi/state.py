import numpy as np
import pandas as pd

from ..model import LocalPolicy, build_sa_index
from ..qlearn import (EstimatedModel, QTable, RewardSpec, taboo_linear_solve,
                      warn_unless_robbins_monro)

QUANTITIES = ('V', 'U', 'L')


class OmpiState(object):
    """Everything the online MP index algorithm carries between steps.

    The 6 * J learning processes are tagged (quantity, j, sigma) with
    quantity in V (live reward), U (constraint cost) and L (unit reward),
    j over the padded state positions 0..J-1 with J = max_i |S_i|, and
    sigma = 0 for the current label vector or 1 for its downshift at j.

    Args:
        inst (:obj:`WcgInstance`): Instance with a budget constraint.
        epsilon (float): Stop precision on the sup change of all tables.
        explore_steps (int): Length of the decaying exploration schedule.
        min_explore (float): Exploration floor until every class is done.
        step_size (dict, optional): Step-size schedule config.
        seed (int): Seed of the argmax tie breaks.
        stimulate (bool): Estimate the model until every SA pair is
            covered, then jump-start all tables on the estimates.
        restimulate (bool): Jump-start again after every advance.
        thresholds (array, optional): Coverage thresholds of the
            estimation.
    """

    def __init__(self,
                 inst,
                 epsilon=1e-3,
                 explore_steps=1000,
                 min_explore=0.05,
                 step_size=None,
                 seed=0,
                 stimulate=False,
                 restimulate=False,
                 thresholds=None,
                 running_average=False):
        if not inst.constraints.budget:
            raise ValueError('online MP indices need a budget constraint')
        self.inst = inst
        self.sa_index = build_sa_index(inst)
        self.epsilon = float(epsilon)
        self.explore_steps = int(explore_steps)
        self.min_explore = float(min_explore)
        self.rng = np.random.default_rng(seed)
        self.stimulate = stimulate or restimulate
        self.restimulate = restimulate
        self.thresholds = thresholds
        self.num_positions = max(c.state_count for c in inst.classes)

        self.labels = [
            np.full(c.state_count, c.action_count - 1, dtype=np.int64)
            for c in inst.classes
        ]
        self.positions = np.zeros(inst.num_classes, dtype=np.int64)
        self.nu_hat = []
        for c in inst.classes:
            nu = np.zeros((c.state_count, c.action_count))
            nu[:, 0] = np.nan
            self.nu_hat.append(nu)
        self.t = 0
        self.stopped = not any((v >= 1).any() for v in self.labels)
        self.max_delta = np.inf
        self.trace = []

        rewards = [
            dict(
                V=RewardSpec.live(),
                U=RewardSpec.costs(inst),
                L=RewardSpec.unit(inst))[q] for q, _, _ in self.tags
        ]
        self.qtable = QTable.zeros(
            inst, self.secondary_policies(), rewards, step_size=step_size)
        warn_unless_robbins_monro(self.qtable.step_size)
        self.est = None
        if self.stimulate:
            self.est = EstimatedModel(
                inst, channels=['reward'], running_average=running_average)

    @property
    def tags(self):
        return [(q, j, sigma) for q in QUANTITIES
                for j in range(self.num_positions) for sigma in (0, 1)]

    def table_index(self, quantity, j, sigma):
        return (QUANTITIES.index(quantity) * self.num_positions + j) * 2 + (
            sigma)

    @property
    def done(self):
        return np.array([not (v >= 1).any() for v in self.labels])

    def downshifted(self, i, j):
        """Labels of class i with position j lowered, when it can be."""
        labels = self.labels[i].copy()
        if j < labels.size and labels[j] >= 1:
            labels[j] -= 1
        return labels

    def secondary_policies(self):
        policies = []
        for _, j, sigma in self.tags:
            if sigma == 0:
                policies.append(LocalPolicy(self.labels))
            else:
                policies.append(
                    LocalPolicy([
                        self.downshifted(i, j)
                        for i in range(self.inst.num_classes)
                    ]))
        return policies

    def exploration_probability(self):
        if self.stopped:
            return 0.0
        if self.explore_steps <= 0:
            return self.min_explore
        return max(self.min_explore, 1.0 - self.t / float(self.explore_steps))

    def index_matrices(self):
        return [nu.copy() for nu in self.nu_hat]

    def exact_tables(self):
        """Taboo Q-factors of every process under the true model."""
        tables = []
        for k, spec in enumerate(self.qtable.rewards):
            policy = self.qtable.policies[k]
            tables.append([
                taboo_linear_solve(cls, policy[i], spec.mean_matrix(
                    self.inst, i)) for i, cls in enumerate(self.inst.classes)
            ])
        return tables

    def record(self):
        for i, nu in enumerate(self.nu_hat):
            for s, a in zip(*np.nonzero(np.isfinite(nu))):
                self.trace.append(
                    dict(
                        t=self.t,
                        i=i,
                        s=int(s),
                        a=int(a),
                        nu=float(nu[s, a]),
                        m=int(self.positions[i])))

    def trace_frame(self):
        return pd.DataFrame(self.trace, columns=['t', 'i', 's', 'a', 'nu', 'm'])

    def dump_trace(self, filename):
        self.trace_frame().to_csv(filename, index=False, float_format='%.12g')
