import logging

import numpy as np

from ..engine import Hook, Simulator
from ..errors import CoverageError
from ..ompi import explore_actions
from ..qlearn import EstimatedModel, collect_counts, pair_sums, update_estimates
from .alp import alp_actions
from .occupancy_lp import ConversionMaps, policy_from_x
from .robust_lp import build_eps_lp, solve_eps_lp

logger = logging.getLogger(__name__)


class OalpController(Hook):
    """Explore until every SA pair is covered, then follow the robust LP.

    Phase one runs ``explore_policy`` (random budget-feasible upgrades by
    default) and estimates the model. At the step T* where the estimates
    freeze, the realized occupancy of that step becomes x0 of the
    (eps, x0)-LP; its action distributions alpha(t) then drive
    :func:`alp_actions` at times T* + t for t = 1..T.

    Args:
        inst (:obj:`WcgInstance`): The system.
        horizon (int): T of the LP.
        eps (float): Box half width budget of the robust LP.
        explore_policy (callable, optional): Phase-one primary policy.
        thresholds (array, optional): Coverage thresholds.
        max_explore (int): Phase-one step limit.
        known_model (bool): Use the true kernels and rewards instead of
            the estimates in the LP.
        exact (bool): Rational simplex.
    """

    def __init__(self,
                 inst,
                 horizon,
                 eps=0.01,
                 explore_policy=None,
                 thresholds=None,
                 max_explore=10000,
                 known_model=False,
                 exact=False,
                 running_average=False):
        self.inst = inst
        self.horizon = int(horizon)
        self.eps = float(eps)
        self.explore_policy = explore_policy
        self.thresholds = thresholds
        self.max_explore = int(max_explore)
        self.known_model = known_model
        self.exact = exact
        self.running_average = running_average
        self.maps = ConversionMaps(inst)
        self._clear()

    def _clear(self):
        self.rng = None
        self.est = None
        self.phase = 'explore'
        self.stop_time = None
        self.solution = None
        self.policy = None
        self.realized = 0.0
        self.swaps = 0
        self.alpha_deviation = []

    @property
    def done(self):
        return self.phase == 'done'

    def reset(self, simulator):
        self._clear()
        self.rng = simulator.rng
        self.est = EstimatedModel(
            self.inst, running_average=self.running_average)
        if hasattr(self.explore_policy, 'reset'):
            self.explore_policy.reset(simulator)

    def __call__(self, t, state, aux):
        if self.phase == 'explore':
            if t >= self.max_explore:
                raise CoverageError(
                    'SA pairs {} not covered after {} steps'.format(
                        self.est.unestimated_rows(), self.max_explore))
            if self.explore_policy is None:
                return explore_actions(self.inst, self.rng)
            return self.explore_policy(t, state, aux)
        if self.phase != 'exploit':
            raise RuntimeError('the LP horizon has been used up')
        alpha = self.policy.at(t - self.stop_time)
        actions, report = alp_actions(
            self.inst, alpha, state.states, self.rng, return_report=True)
        self.swaps += report['swaps']
        self.alpha_deviation.append(
            float(np.abs(report['fractions'] - alpha).max()))
        return actions

    def after_step(self, simulator, step):
        if self.phase == 'explore':
            counts = collect_counts(self.inst, step)
            update_estimates(
                self.est,
                counts,
                dict(reward=pair_sums(self.inst, step, step.rewards)),
                step.occupancy,
                thresholds=self.thresholds,
                t=step.t)
            if self.est.frozen:
                self._plan(step)
        elif self.phase == 'exploit':
            self.realized += float(step.rewards.sum())
            if step.t - self.stop_time >= self.horizon:
                self.phase = 'done'

    def _plan(self, step):
        self.stop_time = step.t
        if self.known_model:
            kernels = [c.kernels for c in self.inst.classes]
            rewards = [c.rewards for c in self.inst.classes]
        else:
            kernels = self.est.kernels
            rewards = self.est.rewards['reward']
        x0 = self.maps.to_x(step.occupancy)
        problem = build_eps_lp(self.inst, kernels, rewards, self.eps, x0,
                               self.horizon)
        self.solution = solve_eps_lp(problem, exact=self.exact).check()
        self.policy = policy_from_x(self.solution)
        self.realized = float(step.rewards.sum())
        self.phase = 'exploit' if self.horizon > 0 else 'done'
        logger.info('T*=%d, robust LP bound %.6g', self.stop_time,
                    float(self.solution.objective))

    def report(self):
        bound = float(self.solution.objective)
        realized = self.realized / self.inst.scale
        return dict(
            stop_time=self.stop_time,
            bound=bound,
            upper_bound=None if self.solution.upper_bound is None else float(
                self.solution.upper_bound),
            realized=realized,
            gap=(bound - realized) / bound if bound else float('nan'),
            kernel_error=self.est.kernel_error(),
            swaps=self.swaps,
            alpha_deviation=max(self.alpha_deviation or [0.0]))


def oalp_run(inst,
             explore_policy=None,
             eps=0.01,
             horizon=10,
             seed=0,
             max_explore=10000,
             hooks=None,
             **kwargs):
    """Run the online LP policy until its horizon is used up.

    Returns:
        tuple: (:obj:`Trajectory`, report dict with T*, the LP bound, the
        realized normalized reward over T*..T*+T and the relative gap).
    """
    controller = OalpController(
        inst,
        horizon,
        eps=eps,
        explore_policy=explore_policy,
        max_explore=max_explore,
        **kwargs)
    simulator = Simulator(inst, controller, seed=seed, hooks=hooks)
    trajectory = simulator.run(
        max_explore + horizon + 1, until=lambda sim: controller.done)
    return trajectory, controller.report()
