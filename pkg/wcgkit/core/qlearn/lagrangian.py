import logging

import numpy as np
from scipy.optimize import minimize_scalar

from ..errors import NonConvergenceError, NotIndexableError, SingularSystemError

logger = logging.getLogger(__name__)

TIE_TOL = 1e-12


def charged_rewards(cls, gamma, costs):
    """r(s, a) - sum_l gamma_l f_l(s, a)."""
    gamma = np.atleast_1d(np.asarray(gamma, dtype=np.float64))
    if len(costs) != gamma.size:
        raise ValueError('expected {} multipliers, got {}'.format(
            len(costs), gamma.size))
    charged = np.array(cls.rewards, dtype=np.float64)
    for g, f in zip(gamma, costs):
        charged -= g * np.asarray(f)
    return charged


def _taboo_normalize(q, ergodic_state):
    """Shift so that max_a Q(s0, a) = 0, the taboo form of the equation."""
    return q - q[ergodic_state].max()


def _relative_value_iteration(cls, rewards, tol, max_iter, damping):
    s0 = cls.ergodic_state
    q = np.zeros((cls.state_count, cls.action_count))
    for it in range(1, max_iter + 1):
        target = rewards + np.einsum('ast,t->sa', cls.kernels, q.max(axis=1))
        target -= target[s0, 0]
        q_next = (1.0 - damping) * q + damping * target
        delta = np.abs(q_next - q).max()
        q = q_next
        if delta < tol:
            gain = (rewards + np.einsum('ast,t->sa', cls.kernels,
                                        q.max(axis=1)) - q)[s0, 0]
            return _taboo_normalize(q, s0), float(gain), it
    raise NonConvergenceError(
        'relative value iteration did not converge in {} iterations'.format(
            max_iter))


def _evaluate(cls, rewards, labels):
    """Gain and relative values h (h(s0) = 0) of a deterministic policy."""
    num_states = cls.state_count
    s0 = cls.ergodic_state
    kernel = cls.policy_kernel(labels)
    reward = cls.policy_vector(labels, rewards)
    # unknowns: gain followed by h(s) for s != s0
    others = [s for s in range(num_states) if s != s0]
    system = np.zeros((num_states, num_states))
    system[:, 0] = 1.0
    for col, s in enumerate(others, start=1):
        system[:, col] = np.eye(num_states)[:, s] - kernel[:, s]
    if np.linalg.cond(system) > 1e12:
        raise SingularSystemError(
            'policy {} is not unichain'.format(np.asarray(labels).tolist()))
    solution = np.linalg.solve(system, reward)
    values = np.zeros(num_states)
    values[others] = solution[1:]
    return float(solution[0]), values


def _policy_iteration(cls, rewards, max_iter):
    labels = np.zeros(cls.state_count, dtype=np.int64)
    for it in range(1, max_iter + 1):
        gain, values = _evaluate(cls, rewards, labels)
        q = rewards - gain + np.einsum('ast,t->sa', cls.kernels, values)
        best = q.max(axis=1)
        current = q[np.arange(cls.state_count), labels]
        improve = best > current + TIE_TOL
        if not improve.any():
            return _taboo_normalize(q, cls.ergodic_state), gain, it
        labels = np.where(improve, q.argmax(axis=1), labels)
    raise NonConvergenceError(
        'policy iteration did not converge in {} iterations'.format(max_iter))


def lagrangian_q(cls,
                 gamma,
                 costs,
                 tol=1e-10,
                 max_iter=100000,
                 method='rvi',
                 damping=0.5):
    """Q-factors and gain of the charged average-reward sub-problem.

    Solves D + Q(s, a) = r(s, a) - sum_l gamma_l f_l(s, a)
    + sum_{s' != s0} p(s, a, s') max_a' Q(s', a').

    Args:
        cls (:obj:`BanditClass`): The gang.
        gamma (array): Multipliers, one per constraint.
        costs (list[array]): The class's (|S|, |A|) constraint functions.
        method (str): 'rvi' for damped relative value iteration anchored
            at (s0, 0), 'policy_iteration' for the exact path.
        damping (float): Weight of the new iterate in 'rvi'.

    Returns:
        tuple: (Q, gain).
    """
    rewards = charged_rewards(cls, gamma, costs)
    if method == 'rvi':
        q, gain, iterations = _relative_value_iteration(
            cls, rewards, tol, max_iter, damping)
    elif method == 'policy_iteration':
        q, gain, iterations = _policy_iteration(cls, rewards, max_iter)
    else:
        raise ValueError('unknown method {}'.format(method))
    logger.debug('lagrangian q (%s): gain %.6g after %d iterations', method,
                 gain, iterations)
    return q, gain


def whittle_bisection(cls, state, costs, tol=1e-9, bracket=None,
                      max_iter=200):
    """Charge that makes both actions of ``state`` equally attractive.

    Args:
        cls (:obj:`BanditClass`): A binary-action gang.
        state (int): The state s.
        costs (array): Action costs f(0), f(1) with f(1) > f(0).
        tol (float): Width of the final interval.
        bracket (float, optional): Half width of the search interval,
            10 * R_max / (f(1) - f(0)) by default.

    Returns:
        float: The Whittle index of ``state``.
    """
    if cls.action_count != 2:
        raise ValueError('whittle indices need binary actions')
    costs = np.asarray(costs, dtype=np.float64).reshape(-1)
    step = costs[1] - costs[0]
    if step <= 0:
        raise ValueError('the active action must cost more than the passive')
    cost_matrix = np.tile(costs, (cls.state_count, 1))
    if bracket is None:
        bracket = 10.0 * max(cls.reward_bound, 1e-12) / step

    def advantage(gamma):
        q, _ = lagrangian_q(
            cls, [gamma], [cost_matrix], method='policy_iteration')
        return q[state, 1] - q[state, 0]

    lo, hi = -bracket, bracket
    g_lo, g_hi = advantage(lo), advantage(hi)
    if g_lo < 0 or g_hi > 0:
        raise NotIndexableError(
            'no sign change of the action advantage at state {} in '
            '[{:.6g}, {:.6g}]'.format(state, lo, hi))
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if advantage(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def lagrangian_dual(inst, gamma, method='policy_iteration'):
    """sum_i N_i D_i(gamma) + h * sum_l gamma_l b_l."""
    gamma = np.atleast_1d(np.asarray(gamma, dtype=np.float64))
    constraints = inst.constraints
    total = inst.scale * float(np.dot(gamma, constraints.offsets))
    for i, cls in enumerate(inst.classes):
        costs = [constraints.function(ell, i)
                 for ell in range(constraints.count)]
        _, gain = lagrangian_q(cls, gamma, costs, method=method)
        total += inst.counts[i] * gain
    return float(total)


def lagrangian_bound(inst, bound=None, xatol=1e-9):
    """Minimum of the Lagrangian dual over a single multiplier.

    Equality constraints take a free multiplier and inequalities a
    nonnegative one.

    Returns:
        tuple: (bound, gamma), the bound being on the total long-run
        reward of all N arms.
    """
    constraints = inst.constraints
    if constraints.count != 1:
        raise ValueError('the dual bound handles a single constraint')
    if bound is None:
        spread = max(c.reward_bound for c in inst.classes)
        f_range = max(
            np.ptp(constraints.function(0, i))
            for i in range(inst.num_classes))
        bound = 10.0 * max(spread, 1e-12) / max(f_range, 1e-12)
    lower = 0.0 if constraints.modes[0] == 'le' else -bound
    result = minimize_scalar(
        lambda g: lagrangian_dual(inst, [g]),
        bounds=(lower, bound),
        method='bounded',
        options=dict(xatol=xatol))
    # the bounded search never evaluates the end points
    candidates = [(result.fun, result.x),
                  (lagrangian_dual(inst, [lower]), lower)]
    value, gamma = min(candidates, key=lambda c: c[0])
    return float(value), float(gamma)
