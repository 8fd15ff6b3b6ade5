import numpy as np

from wcgkit.core import BanditClass, ConstraintSet, WcgInstance
from .registry import INSTANCES


@INSTANCES.register_module
class RandomInstance(WcgInstance):
    """Gangs with full-support Dirichlet kernels and uniform mean rewards.

    Action label a costs a, and the budget allows ``budget_ratio`` of the
    total cost of running every arm at label one.

    Args:
        num_states (int): |S| of every gang.
        num_actions (int): |A| of every gang.
        num_classes (int): I.
        seed (int): Seed of the generator.
        base_counts (list[int], optional): N^0 per gang, 4 by default.
        concentration (float): Dirichlet parameter of the kernel rows.
        reward_law (dict, optional): Sampling law, deterministic by
            default.
    """

    def __init__(self,
                 num_states=3,
                 num_actions=2,
                 num_classes=1,
                 seed=0,
                 base_counts=None,
                 budget_ratio=0.5,
                 concentration=1.0,
                 reward_law=None,
                 scale=1,
                 horizon=None,
                 discount=1.0):
        rng = np.random.default_rng(seed)
        base_counts = [4] * num_classes if base_counts is None else list(
            base_counts)
        classes = []
        for i in range(num_classes):
            kernels = rng.dirichlet(
                np.full(num_states, concentration),
                size=(num_actions, num_states))
            rewards = rng.random((num_states, num_actions))
            classes.append(
                BanditClass(
                    kernels,
                    rewards,
                    reward_law=reward_law,
                    ergodic_state=0,
                    name='random_{}'.format(i)))
        costs = [np.arange(num_actions, dtype=np.float64)] * num_classes
        budget = budget_ratio * float(np.sum(base_counts))
        constraints = ConstraintSet.budget_constraint(
            costs, budget, [num_states] * num_classes)
        super(RandomInstance, self).__init__(
            classes,
            base_counts,
            constraints=constraints,
            scale=scale,
            horizon=horizon,
            discount=discount)
