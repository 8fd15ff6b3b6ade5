import numpy as np

from ..errors import SingularSystemError
from ..model import reaches_state, stationary_distribution


def cost_matrix(cls, costs):
    """(|S|, |A|) constraint function from per-action costs or a matrix."""
    costs = np.asarray(costs, dtype=np.float64)
    if costs.ndim == 1:
        costs = np.tile(costs, (cls.state_count, 1))
    if costs.shape != (cls.state_count, cls.action_count):
        raise ValueError('costs must have shape {}, got {}'.format(
            (cls.state_count, cls.action_count), costs.shape))
    return costs


class PolicyValue(object):
    """Regenerative cycle quantities of a local policy, seen from s0.

    ``values`` holds the reward, cost and return-time vectors until the
    first return to s0; ``gamma`` and ``omega`` are the long-run average
    reward and cost.
    """

    def __init__(self, labels, reward_values, cost_values, time_values,
                 ergodic_state):
        self.labels = np.asarray(labels, dtype=np.int64)
        self.reward_values = reward_values
        self.cost_values = cost_values
        self.time_values = time_values
        self.ergodic_state = ergodic_state

    def __repr__(self):
        return '{}(labels={}, gamma={:.6g}, omega={:.6g})'.format(
            self.__class__.__name__, self.labels.tolist(), self.gamma,
            self.omega)

    @property
    def v(self):
        return float(self.reward_values[self.ergodic_state])

    @property
    def u(self):
        return float(self.cost_values[self.ergodic_state])

    @property
    def l(self):  # noqa: E743
        return float(self.time_values[self.ergodic_state])

    @property
    def gamma(self):
        return self.v / self.l

    @property
    def omega(self):
        return self.u / self.l


def _cycle_values(masked_rows, payoff):
    num_states = masked_rows.shape[0]
    matrix = np.eye(num_states) - masked_rows
    if np.linalg.cond(matrix) > 1e12:
        raise SingularSystemError('taboo system is singular')
    return np.linalg.solve(matrix, payoff)


def policy_value(cls, labels, costs, kernel=None):
    """Cycle reward, cost and length of ``labels`` by taboo linear solves.

    Only states reachable from s0 under the policy enter the systems, so
    transient states that cannot be entered do not make them singular.

    Raises:
        SingularSystemError: s0 cannot be reached back.
    """
    labels = np.asarray(labels, dtype=np.int64)
    costs = cost_matrix(cls, costs)
    rows = cls.policy_kernel(labels, kernel)
    s0 = cls.ergodic_state
    masked = np.array(rows)
    masked[:, s0] = 0.0
    reach = _reachable_from(rows, s0)
    sub = np.ix_(reach, reach)
    if not reaches_state(rows[sub], int(np.flatnonzero(reach == s0)[0])):
        raise SingularSystemError(
            'ergodic state {} is not recurrent under labels {}'.format(
                s0, labels.tolist()))
    values = []
    for payoff in (cls.policy_vector(labels), cls.policy_vector(
            labels, costs), np.ones(cls.state_count)):
        full = np.full(cls.state_count, np.nan)
        full[reach] = _cycle_values(masked[sub], payoff[reach])
        values.append(full)
    return PolicyValue(labels, values[0], values[1], values[2], s0)


def _reachable_from(rows, source):
    seen = np.zeros(rows.shape[0], dtype=bool)
    seen[source] = True
    frontier = [source]
    while frontier:
        s = frontier.pop()
        for s_next in np.flatnonzero(rows[s] > 0):
            if not seen[s_next]:
                seen[s_next] = True
                frontier.append(s_next)
    return np.flatnonzero(seen)


def stationary_value(cls, labels, costs):
    """(gamma, omega) from the stationary distribution of the policy."""
    labels = np.asarray(labels, dtype=np.int64)
    pi = stationary_distribution(cls.policy_kernel(labels))
    return (float(pi @ cls.policy_vector(labels)),
            float(pi @ cls.policy_vector(labels, cost_matrix(cls, costs))))


def simulate_policy_value(cls, labels, costs, num_cycles=1000, seed=0):
    """Monte Carlo estimate of (gamma, omega) over regenerative cycles.

    Cycles start at s0 and end at the first return; rewards are sampled
    from the class's reward law.
    """
    labels = np.asarray(labels, dtype=np.int64)
    costs = cost_matrix(cls, costs)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    rows = np.cumsum(cls.policy_kernel(labels), axis=1)
    s0 = cls.ergodic_state
    reward = cost = length = 0.0
    for _ in range(int(num_cycles)):
        s = s0
        while True:
            a = labels[s]
            u_move, u_reward = rng.random(2)
            reward += float(
                cls.reward_law.sample(cls.rewards[s, a], u_reward))
            cost += costs[s, a]
            length += 1
            s = min(int(np.searchsorted(rows[s], u_move, side='right')),
                    cls.state_count - 1)
            if s == s0:
                break
    return reward / length, cost / length
