import logging

import numpy as np

from wcgkit.core import (OmpiState, ds_indices, mp_assemble_actions,
                         ompi_primary_action, ompi_step, whittle_bisection)
from .base import BasePolicy
from .registry import POLICIES

logger = logging.getLogger(__name__)


@POLICIES.register_module
class MPIndexPolicy(BasePolicy):
    """Offline MP index policy: DS indices computed once per instance."""

    def __init__(self, tie_seed=None):
        super(MPIndexPolicy, self).__init__()
        self.tie_seed = tie_seed
        self.tables = None
        self._inst = None

    def compute(self, inst):
        rng = None if self.tie_seed is None else np.random.default_rng(
            self.tie_seed)
        return [t.index_matrix() for t in ds_indices(inst, rng)]

    def reset(self, simulator):
        super(MPIndexPolicy, self).reset(simulator)
        if self._inst is not simulator.inst:
            self.tables = self.compute(simulator.inst)
            self._inst = simulator.inst

    def act(self, t, state, aux):
        return mp_assemble_actions(self.inst, self.tables, state.states,
                                   self.rng)


@POLICIES.register_module
class WhittleIndexPolicy(MPIndexPolicy):
    """Index policy on Whittle indices found by bisection."""

    def __init__(self, tol=1e-9):
        super(WhittleIndexPolicy, self).__init__()
        self.tol = tol

    def compute(self, inst):
        tables = []
        for i, cls in enumerate(inst.classes):
            costs = inst.constraints.costs(i)
            matrix = np.full((cls.state_count, cls.action_count), np.nan)
            for s in range(cls.state_count):
                matrix[s, 1] = whittle_bisection(cls, s, costs, tol=self.tol)
            tables.append(matrix)
        return tables


@POLICIES.register_module
class OMPIPolicy(BasePolicy):
    """Online MP index policy: learns its indices from the live run.

    Keyword arguments are those of :obj:`OmpiState`; ``trace_interval``
    records the index estimates every n steps.
    """

    def __init__(self, trace_interval=0, **kwargs):
        super(OMPIPolicy, self).__init__()
        self.trace_interval = trace_interval
        self.kwargs = kwargs
        self.state = None

    def reset(self, simulator):
        super(OMPIPolicy, self).reset(simulator)
        kwargs = dict(self.kwargs)
        kwargs.setdefault('seed', simulator.seed)
        self.state = OmpiState(simulator.inst, **kwargs)

    def act(self, t, state, aux):
        return ompi_primary_action(self.state, state.states, self.rng)

    def after_step(self, simulator, step):
        ompi_step(self.state, step, self.trace_interval)

    def index_matrices(self):
        return self.state.index_matrices()

    def summary(self):
        return dict(
            stopped=float(self.state.stopped),
            positions=float(self.state.positions.sum()))
