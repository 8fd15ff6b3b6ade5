import numpy as np

from wcgkit.core import (OalpController, alp_actions, build_lp,
                         initial_marginal, policy_from_x, solve_lp)
from .base import BasePolicy
from .registry import POLICIES


@POLICIES.register_module
class ALPPolicy(BasePolicy):
    """Rounds the occupancy LP's action distributions to feasible actions.

    The LP starts from the realized initial states (their state marginal
    is fixed, the first actions are free) and spans ``horizon`` steps, the
    instance's horizon by default; later steps reuse the last slice.
    """

    def __init__(self, horizon=None, exact=False):
        super(ALPPolicy, self).__init__()
        self.horizon = horizon
        self.exact = exact
        self.solution = None
        self.policy = None

    def reset(self, simulator):
        super(ALPPolicy, self).reset(simulator)
        inst = simulator.inst
        horizon = self.horizon if self.horizon is not None else inst.horizon
        if horizon is None:
            raise ValueError('ALPPolicy needs a horizon')
        x0 = initial_marginal(inst, states=simulator.state.states)
        self.solution = solve_lp(
            build_lp(inst, x0, horizon, initial='state'),
            exact=self.exact).check()
        self.policy = policy_from_x(self.solution)
        self.swaps = 0
        self.alpha_deviation = 0.0

    @property
    def bound(self):
        return float(self.solution.objective)

    def act(self, t, state, aux):
        alpha = self.policy.at(t)
        actions, report = alp_actions(
            self.inst, alpha, state.states, self.rng, return_report=True)
        self.swaps += report['swaps']
        self.alpha_deviation = max(
            self.alpha_deviation,
            float(np.abs(report['fractions'] - alpha).max()))
        return actions

    def summary(self):
        return dict(
            lp_bound=self.bound,
            swaps=float(self.swaps),
            alpha_deviation=self.alpha_deviation)


@POLICIES.register_module
class OALPPolicy(BasePolicy):
    """Explore, estimate, then follow the robust occupancy LP.

    Keyword arguments are those of :obj:`OalpController`; ``explore`` is
    an optional policy config for the exploration phase.
    """

    def __init__(self, horizon=10, eps=0.01, explore=None, **kwargs):
        super(OALPPolicy, self).__init__()
        self.horizon = horizon
        self.eps = eps
        self.explore = explore
        self.kwargs = kwargs
        self.controller = None

    def reset(self, simulator):
        from .builder import build_policy
        super(OALPPolicy, self).reset(simulator)
        explore = None if self.explore is None else build_policy(
            self.explore)
        self.controller = OalpController(
            simulator.inst,
            self.horizon,
            eps=self.eps,
            explore_policy=explore,
            **self.kwargs)
        self.controller.reset(simulator)

    @property
    def done(self):
        return self.controller.done

    def act(self, t, state, aux):
        return self.controller(t, state, aux)

    def after_step(self, simulator, step):
        self.controller.after_step(simulator, step)

    def summary(self):
        if self.controller.solution is None:
            return dict()
        report = self.controller.report()
        return dict(
            stop_time=float(report['stop_time']),
            realized=report['realized'],
            lp_bound=report['bound'],
            lp_gap=report['gap'],
            kernel_error=report['kernel_error'],
            alpha_deviation=report['alpha_deviation'])
