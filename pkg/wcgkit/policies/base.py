from abc import ABCMeta, abstractmethod

from wcgkit.core import Hook


class BasePolicy(Hook, metaclass=ABCMeta):
    """Base class of primary policies.

    A primary policy maps (t, system state, aux) to a flat action vector.
    The simulator calls :meth:`reset` before the run, hands the decision
    stream over and attaches the policy as its first hook, so online
    policies learn in :meth:`after_step`.
    """

    def __init__(self):
        self.inst = None
        self.rng = None

    def __call__(self, t, state, aux):
        return self.act(t, state, aux)

    def reset(self, simulator):
        self.inst = simulator.inst
        self.rng = simulator.rng

    @abstractmethod
    def act(self, t, state, aux):
        pass

    def summary(self):
        """Policy-specific quantities reported next to the run metrics."""
        return dict()
