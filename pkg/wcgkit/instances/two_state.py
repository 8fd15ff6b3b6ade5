import numpy as np

from wcgkit.core import BanditClass, ConstraintSet, WcgInstance
from .registry import INSTANCES

PASSIVE_KERNEL = [[0.9, 0.1], [0.2, 0.8]]
ACTIVE_KERNEL = [[0.8, 0.2], [0.9, 0.1]]
MEAN_REWARDS = [[1.0, 0.9], [0.2, 0.0]]


@INSTANCES.register_module
class TwoStateInstance(WcgInstance):
    """One gang of binary-action machines in a good (0) or bad (1) state.

    Activating a machine costs one unit of budget and a little reward but
    brings a bad machine back to the good state with probability 0.9. At
    most ``budget`` machines per ``base_count`` may be active.
    """

    def __init__(self,
                 base_count=10,
                 budget=5,
                 scale=1,
                 horizon=None,
                 discount=1.0,
                 half_width=0.1,
                 initial_distribution=None):
        law = dict(type='uniform', half_width=half_width) if half_width else (
            dict(type='deterministic'))
        cls = BanditClass(
            np.array([PASSIVE_KERNEL, ACTIVE_KERNEL]),
            np.array(MEAN_REWARDS),
            reward_law=law,
            ergodic_state=0,
            initial_distribution=initial_distribution,
            name='machine')
        constraints = ConstraintSet.budget_constraint([[0.0, 1.0]], budget,
                                                      [cls.state_count])
        super(TwoStateInstance, self).__init__([cls], [base_count],
                                               constraints=constraints,
                                               scale=scale,
                                               horizon=horizon,
                                               discount=discount)
