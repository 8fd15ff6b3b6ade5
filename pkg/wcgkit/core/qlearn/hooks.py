import logging

import numpy as np
import pandas as pd

from ..engine import Hook
from ..errors import GoodCaseError
from .counts import collect_counts
from .estimation import EstimatedModel, stimulate, update_estimates
from .qtable import RewardSpec, q_update
from .step_size import warn_unless_robbins_monro

logger = logging.getLogger(__name__)


def channel_sums(inst, step, counts, specs):
    """Per-class reward sums of every distinct reward channel."""
    sums = dict()
    for spec in specs:
        if spec.name not in sums:
            sums[spec.name] = spec.sums(inst, step, counts)
    return sums


class QLearnerHook(Hook):
    """Drives K learning processes with the live trajectory.

    Args:
        qtable (:obj:`QTable`): Initial estimates.
        oracle (list[list[array]], optional): Exact Q-factors per process
            and class; enables the error column of the trace.
        trace_interval (int): Record the trace every n steps, 0 disables it.
    """

    def __init__(self, qtable, oracle=None, trace_interval=0):
        self.qtable = qtable
        self.oracle = oracle
        warn_unless_robbins_monro(qtable.step_size)
        self.trace_interval = trace_interval
        self.trace = []
        self.last_counts = None

    def q_error(self):
        if self.oracle is None:
            return None
        return max(
            np.abs(q - q_star).max()
            for per_class, oracle in zip(self.qtable.tables, self.oracle)
            for q, q_star in zip(per_class, oracle))

    def after_step(self, simulator, step):
        counts = collect_counts(simulator.inst, step)
        sums = channel_sums(simulator.inst, step, counts, self.qtable.rewards)
        self.qtable = q_update(
            self.qtable, counts,
            [sums[spec.name] for spec in self.qtable.rewards])
        self.last_counts = counts
        if self.trace_interval and self.every_n_steps(step,
                                                      self.trace_interval):
            self._record(step.t + 1)

    def _record(self, t):
        error = self.q_error()
        for k, per_class in enumerate(self.qtable.tables):
            for i, q in enumerate(per_class):
                for (s, a), value in np.ndenumerate(q):
                    self.trace.append(
                        dict(t=t, k=k, i=i, s=s, a=a, q=value, error=error))

    def trace_frame(self):
        return pd.DataFrame(
            self.trace, columns=['t', 'k', 'i', 's', 'a', 'q', 'error'])

    def dump_trace(self, filename):
        self.trace_frame().to_csv(
            filename, index=False, float_format='%.12g')


class EstimationHook(Hook):
    """Empirical model estimation until every SA label has been covered.

    Args:
        est (:obj:`EstimatedModel`, optional): Model to fill, created for
            the simulated instance before the run when omitted.
        thresholds (array, optional): Per-label coverage thresholds.
        learner (:obj:`QLearnerHook`, optional): Learner to jump-start with
            :func:`stimulate` once the estimates freeze.
        running_average (bool): See :obj:`EstimatedModel`.
    """

    def __init__(self,
                 est=None,
                 thresholds=None,
                 learner=None,
                 running_average=False):
        self.est = est
        self.thresholds = thresholds
        self.learner = learner
        self.running_average = running_average
        self.stimulated = False

    def before_run(self, simulator):
        if self.est is None:
            channels = ['reward']
            if self.learner is not None:
                channels = [spec.name for spec in self.learner.qtable.rewards]
            self.est = EstimatedModel(
                simulator.inst,
                channels=sorted(set(channels)),
                running_average=self.running_average)

    def after_step(self, simulator, step):
        if self.est.frozen:
            return
        counts = collect_counts(simulator.inst, step)
        specs = self.learner.qtable.rewards if self.learner else []
        sums = channel_sums(simulator.inst, step, counts, specs)
        if 'reward' in self.est.rewards and 'reward' not in sums:
            sums['reward'] = channel_sums(simulator.inst, step, counts,
                                          [RewardSpec.live()])['reward']
        update_estimates(
            self.est,
            counts, {k: v for k, v in sums.items() if k in self.est.rewards},
            step.occupancy,
            thresholds=self.thresholds,
            t=step.t)
        if self.est.frozen:
            logger.info('all SA pairs covered at T*=%d, kernel error %.4g',
                        self.est.stop_time, self.est.kernel_error())
            if self.learner is not None and not self.stimulated:
                try:
                    self.learner.qtable = stimulate(self.learner.qtable,
                                                    self.est)
                    self.stimulated = True
                except GoodCaseError as err:
                    logger.warning('skipping stimulation: %s', err)
