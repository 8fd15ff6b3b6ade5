import logging

import numpy as np

from ..errors import GoodCaseError
from ..indices import mp_assemble_actions
from ..qlearn import (channel_sums, collect_counts, q_update, stimulate,
                      update_estimates)

logger = logging.getLogger(__name__)

TIE_TOL = 1e-12


def explore_actions(inst, rng):
    """Random upgrades in uniform order until the first one over budget.

    All arms start passive; (arm, label >= 1) candidates are drawn without
    replacement and each replaces the arm's label while the budget holds.
    """
    constraints = inst.constraints
    costs = [np.asarray(constraints.costs(i)) for i in range(inst.num_classes)]
    actions = np.zeros(inst.total_arms, dtype=np.int64)
    total = sum(float(inst.counts[i]) * c[0] for i, c in enumerate(costs))
    limit = inst.budget_limit()
    arms, labels = [], []
    for i, cls in enumerate(inst.classes):
        block = np.arange(inst.total_arms)[inst.arm_slice(i)]
        for a in range(1, cls.action_count):
            arms.append(block)
            labels.append(np.full(block.size, a))
    if not arms:
        return actions
    arms = np.concatenate(arms)
    labels = np.concatenate(labels)
    for k in rng.permutation(arms.size):
        n, a = arms[k], labels[k]
        cls_costs = costs[inst.arm_class[n]]
        delta = cls_costs[a] - cls_costs[actions[n]]
        if total + delta > limit + 1e-12:
            break
        actions[n] = a
        total += delta
    return actions


def ompi_primary_action(state, states, rng, p_bar=None):
    """Primary decision: MP actions on the estimated indices or exploration.

    Args:
        state (:obj:`OmpiState`): Current online state.
        states (array): Flat state vector.
        rng (:obj:`numpy.random.Generator`): Decision stream.
        p_bar (float, optional): Probability of the MP-index branch,
            one minus the state's exploration probability by default.
    """
    if p_bar is None:
        p_bar = 1.0 - state.exploration_probability()
    if p_bar >= 1.0 or rng.random() < p_bar:
        return mp_assemble_actions(state.inst, state.index_matrices(), states,
                                   rng)
    return explore_actions(state.inst, rng)


def _jump_start(state):
    try:
        state.qtable = stimulate(state.qtable, state.est)
    except GoodCaseError as err:
        logger.warning('skipping stimulation: %s', err)


def _max_delta(before, after):
    return max(
        np.abs(a - b).max() for per_before, per_after in zip(before, after)
        for b, a in zip(per_before, per_after))


def ompi_learn_step(state, step):
    """Advance every learning process with one live step.

    The estimated model (when stimulation is on) is refreshed from the
    same counts; once it freezes every table is replaced by the fixed
    point under the estimates.
    """
    if state.stopped:
        return state
    inst = state.inst
    counts = collect_counts(inst, step)
    sums = channel_sums(inst, step, counts, state.qtable.rewards)
    before = state.qtable.tables
    state.qtable = q_update(state.qtable, counts,
                            [sums[spec.name] for spec in state.qtable.rewards])
    if state.est is not None and not state.est.frozen:
        update_estimates(
            state.est,
            counts, {'reward': sums['reward']},
            step.occupancy,
            thresholds=state.thresholds,
            t=step.t)
        if state.est.frozen:
            logger.info('OMPI estimates frozen at T*=%d', state.est.stop_time)
            _jump_start(state)
    state.max_delta = _max_delta(before, state.qtable.tables)
    state.t = step.t + 1
    return state


def _ratio(q_num, q_den, s0, action):
    return q_num[s0, action] / q_den[s0, action]


def ompi_index_update(state):
    """Refresh nu_hat of every non-passive (i, j) from the tables at s0."""
    if state.stopped:
        return state
    tables = state.qtable.tables
    for i, cls in enumerate(state.inst.classes):
        s0 = cls.ergodic_state
        labels = state.labels[i]
        for j in np.flatnonzero(labels >= 1):
            values = []
            for sigma in (0, 1):
                policy = state.qtable.policies[state.table_index('V', j,
                                                                 sigma)][i]
                action = policy[s0]
                q_v, q_u, q_l = (tables[state.table_index(q, j, sigma)][i]
                                 for q in ('V', 'U', 'L'))
                if q_l[s0, action] <= 0:
                    break
                values.append((_ratio(q_v, q_l, s0, action),
                               _ratio(q_u, q_l, s0, action)))
            if len(values) < 2:
                continue
            (gamma0, omega0), (gamma1, omega1) = values
            d_omega = omega0 - omega1
            nu = 0.0 if abs(d_omega) <= 1e-14 else (gamma0 -
                                                     gamma1) / d_omega
            state.nu_hat[i][j, labels[j]] = nu
    return state


def ompi_stop_check(state):
    """Advance the downshift of every unfinished class once tables settle."""
    if state.stopped or not state.max_delta < state.epsilon:
        return state
    for i in np.flatnonzero(~state.done):
        labels = state.labels[i]
        eligible = np.flatnonzero(labels >= 1)
        nus = state.nu_hat[i][eligible, labels[eligible]]
        best = eligible[nus >= nus.max() - TIE_TOL]
        chosen = int(best[0] if best.size == 1 else state.rng.choice(best))
        labels = labels.copy()
        labels[chosen] -= 1
        state.labels[i] = labels
        state.positions[i] += 1
        logger.debug('t=%d class %d: downshift state %d (nu=%.6g)', state.t,
                     i, chosen, nus[eligible == chosen][0])
    state.max_delta = np.inf
    if state.done.all():
        state.stopped = True
        logger.info('OMPI stopped at t=%d', state.t)
        return state
    state.qtable = state.qtable.replace(policies=state.secondary_policies())
    if state.restimulate and state.est is not None and state.est.frozen:
        _jump_start(state)
    return state


def ompi_step(state, step, trace_interval=0):
    """Learning, index update and stop check for one observed step."""
    ompi_learn_step(state, step)
    ompi_index_update(state)
    ompi_stop_check(state)
    if trace_interval and state.t % trace_interval == 0:
        state.record()
    return state
