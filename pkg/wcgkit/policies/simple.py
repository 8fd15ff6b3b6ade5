import numpy as np

from wcgkit.core import (LocalPolicy, RandomizedPolicy, alp_actions,
                         build_sa_index, explore_actions)
from .base import BasePolicy
from .registry import POLICIES


@POLICIES.register_module
class LocalActionPolicy(BasePolicy):
    """Fixed action label per (class, state)."""

    def __init__(self, labels):
        super(LocalActionPolicy, self).__init__()
        self.policy = LocalPolicy(labels)

    def reset(self, simulator):
        super(LocalActionPolicy, self).reset(simulator)
        self.policy.check(self.inst)

    def act(self, t, state, aux):
        return self.policy.actions(self.inst, state.states)


@POLICIES.register_module
class RandomizedActionPolicy(BasePolicy):
    """Independent draws from time-indexed action distributions.

    Args:
        alpha (array, optional): (T + 1, SA labels) or a single row;
            uniform over actions when omitted.
        active (float, optional): Probability of the highest label in
            every state, the rest on the passive label.
    """

    def __init__(self, alpha=None, active=None):
        super(RandomizedActionPolicy, self).__init__()
        self.alpha = alpha
        self.active = active
        self.policy = None

    def build(self, inst):
        sa_index = build_sa_index(inst)
        if self.alpha is not None:
            return RandomizedPolicy(self.alpha, sa_index)
        if self.active is None:
            return RandomizedPolicy.uniform(sa_index)
        alpha = np.zeros(sa_index.total)
        widths = np.asarray(sa_index.action_counts)[sa_index.class_of]
        alpha[sa_index.action_of == 0] = 1.0 - self.active
        alpha[sa_index.action_of == widths - 1] += self.active
        return RandomizedPolicy(alpha, sa_index)

    def reset(self, simulator):
        super(RandomizedActionPolicy, self).reset(simulator)
        self.policy = self.build(self.inst)

    def act(self, t, state, aux):
        return self.policy.sample(self.inst, state.states, t, self.rng)


@POLICIES.register_module
class RandomExplorationPolicy(BasePolicy):
    """Random feasible actions that give every SA pair a positive chance.

    Under a budget, random upgrades are applied in uniform order until the
    first one that breaks the budget; other constraints get a uniform
    action split per (class, state) repaired to feasibility.
    """

    def reset(self, simulator):
        super(RandomExplorationPolicy, self).reset(simulator)
        self.sa_index = build_sa_index(self.inst)
        self.uniform = RandomizedPolicy.uniform(self.sa_index)

    def act(self, t, state, aux):
        if self.inst.constraints.budget:
            return explore_actions(self.inst, self.rng)
        return alp_actions(
            self.inst,
            self.uniform.at(0),
            state.states,
            self.rng,
            sa_index=self.sa_index)
