import logging

import numpy as np
import pandas as pd

from ..errors import InfeasibleActionError, InvalidActionError
from ..model import (build_sa_index, eval_constraints, initial_states,
                     is_feasible, occupancy_from_state)
from .hooks import Hook
from .streams import ArmStreams, policy_generator


def _read_only(array):
    array = np.array(array)
    array.setflags(write=False)
    return array


class SystemState(object):
    """Per-arm states of a running system, its clock and arm streams."""

    def __init__(self, inst, states, t=0, streams=None, seed=0):
        states = np.asarray(states, dtype=np.int64)
        if states.shape != (inst.total_arms, ):
            raise ValueError('expected {} arm states, got {}'.format(
                inst.total_arms, states.shape))
        for i, cls in enumerate(inst.classes):
            block = states[inst.arm_slice(i)]
            if block.size and (block.min() < 0
                               or block.max() >= cls.state_count):
                raise ValueError('class {}: state out of range'.format(i))
        self.inst = inst
        self.states = _read_only(states)
        self.t = int(t)
        self.streams = (
            streams if streams is not None else ArmStreams(seed, inst.counts))

    def __repr__(self):
        return '{}(t={}, arms={})'.format(self.__class__.__name__, self.t,
                                          self.states.size)

    @classmethod
    def initial(cls, inst, seed, states=None):
        if states is None:
            states = initial_states(inst)
        return cls(inst, states, t=0, seed=seed)


class StepData(object):
    """Read-only record of one transition t -> t + 1."""

    __slots__ = ('t', 'states', 'actions', 'next_states', 'rewards',
                 'occupancy', 'residuals')

    def __init__(self, t, states, actions, next_states, rewards, occupancy,
                 residuals):
        self.t = t
        self.states = _read_only(states)
        self.actions = _read_only(actions)
        self.next_states = _read_only(next_states)
        self.rewards = _read_only(rewards)
        self.occupancy = _read_only(occupancy)
        self.residuals = _read_only(residuals)


def check_actions(inst, actions):
    actions = np.asarray(actions)
    if actions.shape != (inst.total_arms, ):
        raise InvalidActionError('expected {} actions, got shape {}'.format(
            inst.total_arms, actions.shape))
    if not np.issubdtype(actions.dtype, np.integer):
        raise InvalidActionError('actions must be integer labels')
    for i, cls in enumerate(inst.classes):
        block = actions[inst.arm_slice(i)]
        if block.size and (block.min() < 0
                           or block.max() >= cls.action_count):
            raise InvalidActionError(
                'class {}: action label out of range [0, {})'.format(
                    i, cls.action_count))
    return actions.astype(np.int64)


def step_system(state, actions):
    """Move every arm one step and sample its reward.

    Rewards belong to the SA pair occupied at time t.

    Returns:
        tuple: (:obj:`SystemState` at t + 1, per-arm rewards)
    """
    inst = state.inst
    actions = check_actions(inst, actions)
    u_move, u_reward = state.streams.draw()
    next_states = np.empty_like(state.states)
    rewards = np.empty(inst.total_arms)
    for i, cls in enumerate(inst.classes):
        block = inst.arm_slice(i)
        s, a = state.states[block], actions[block]
        cdf = np.cumsum(cls.kernels[a, s, :], axis=1)
        next_states[block] = np.minimum(
            (u_move[block, None] >= cdf).sum(axis=1), cls.state_count - 1)
        rewards[block] = cls.reward_law.sample(cls.rewards[s, a],
                                               u_reward[block])
    return SystemState(inst, next_states, state.t + 1,
                       state.streams), rewards


class Trajectory(object):
    """Per-step occupancy, residuals and rewards of one run."""

    def __init__(self, inst, sa_index, record_states=False):
        self.inst = inst
        self.sa_index = sa_index
        self.record_states = record_states
        self.times = []
        self.occupancy = []
        self.residuals = []
        self.rewards = []
        self.active = []
        self.states = []

    def __len__(self):
        return len(self.times)

    def append(self, step):
        if self.record_states:
            if not self.states:
                self.states.append(np.array(step.states))
            self.states.append(np.array(step.next_states))
        self.times.append(step.t)
        self.occupancy.append(np.array(step.occupancy))
        self.residuals.append(np.array(step.residuals))
        self.rewards.append(float(step.rewards.sum()))
        self.active.append(int((step.actions > 0).sum()))

    @property
    def step_rewards(self):
        return np.asarray(self.rewards)

    @property
    def total_reward(self):
        return float(np.sum(self.rewards))

    @property
    def discounted_reward(self):
        """sum_k beta^(k+1) R_k over the recorded steps."""
        beta = self.inst.discount
        weights = beta**np.arange(1, len(self.rewards) + 1)
        return float(np.dot(weights, self.rewards))

    @property
    def normalized_reward(self):
        return self.total_reward / self.inst.scale

    def occupancy_array(self):
        return np.asarray(self.occupancy).reshape(-1, self.sa_index.total)

    def to_frame(self, replication=0):
        occupancy = self.occupancy_array()
        residuals = np.asarray(self.residuals).reshape(
            -1, self.inst.constraints.count)
        columns = dict(replication=replication, t=self.times)
        for iota in range(self.sa_index.total):
            columns['z_{}'.format(iota)] = occupancy[:, iota]
        for ell in range(residuals.shape[1]):
            columns['residual_{}'.format(ell)] = residuals[:, ell]
        columns['reward'] = self.rewards
        return pd.DataFrame(columns)

    def to_csv(self, filename, replication=0):
        self.to_frame(replication).to_csv(
            filename, index=False, float_format='%.12g')


class Simulator(object):
    """Runner of one replication: a policy drives the system, hooks watch.

    Args:
        inst (:obj:`WcgInstance`): System to simulate.
        policy (callable): ``policy(t, state, aux) -> actions``. Objects
            with ``reset(simulator)`` are reset before the run and objects
            with ``after_step`` are attached as the first hook.
        seed (int): Master seed of the arm and decision streams.
        hooks (list[:obj:`Hook`], optional): Learning or logging hooks.
        strict (bool): Raise when the policy violates the constraints.
        states (array, optional): Initial states, the instance's initial
            distribution by default.
        record_states (bool): Keep all per-arm states in the trajectory.
    """

    def __init__(self,
                 inst,
                 policy,
                 seed=0,
                 hooks=None,
                 strict=True,
                 states=None,
                 record_states=False,
                 logger=None):
        self.inst = inst
        self.policy = policy
        self.seed = int(seed)
        self.strict = strict
        self.logger = logger or logging.getLogger(__name__)
        self.sa_index = build_sa_index(inst)
        self.state = SystemState.initial(inst, self.seed, states)
        self.rng = policy_generator(self.seed)
        self.aux = dict()
        self.trajectory = Trajectory(
            inst, self.sa_index, record_states=record_states)
        self._hooks = []
        if hasattr(policy, 'after_step'):
            self._hooks.append(policy)
        for hook in hooks or []:
            self.register_hook(hook)

    @property
    def hooks(self):
        return self._hooks

    @property
    def t(self):
        return self.state.t

    def register_hook(self, hook):
        if not isinstance(hook, Hook):
            raise TypeError('hook must be a Hook, but got {}'.format(
                type(hook)))
        self._hooks.append(hook)

    def step(self):
        state = self.state
        actions = check_actions(
            self.inst, self.policy(state.t, state, self.aux))
        residuals = eval_constraints(self.inst, state.states, actions)
        if self.strict and not is_feasible(self.inst, residuals):
            raise InfeasibleActionError(
                't={}: actions violate constraints, residuals {}'.format(
                    state.t, residuals.tolist()))
        occupancy = occupancy_from_state(self.inst, self.sa_index,
                                         state.states, actions)
        next_state, rewards = step_system(state, actions)
        step = StepData(state.t, state.states, actions, next_state.states,
                        rewards, occupancy, residuals)
        self.trajectory.append(step)
        self.state = next_state
        for hook in self._hooks:
            hook.after_step(self, step)
        return step

    def run(self, horizon, until=None):
        """Run ``horizon`` steps, fewer once ``until(simulator)`` holds."""
        if hasattr(self.policy, 'reset'):
            self.policy.reset(self)
        for hook in self._hooks:
            hook.before_run(self)
        for _ in range(int(horizon)):
            if until is not None and until(self):
                break
            self.step()
        for hook in self._hooks:
            hook.after_run(self)
        return self.trajectory


def run_episode(inst, policy, horizon, seed, hooks=None, strict=True,
                **kwargs):
    """Simulate ``horizon`` decision epochs and return the trajectory."""
    simulator = Simulator(
        inst, policy, seed=seed, hooks=hooks, strict=strict, **kwargs)
    return simulator.run(horizon)
