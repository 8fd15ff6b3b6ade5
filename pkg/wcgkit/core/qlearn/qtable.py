import numpy as np

from ..errors import GoodCaseError, NonConvergenceError, SingularSystemError
from ..model import LocalPolicy, reaches_state
from .counts import pair_sums
from .step_size import build_step_size


class RewardSpec(object):
    """Reward fed to a learning process.

    ``live`` uses the rewards sampled by the running system; ``matrix``
    uses a known per-class (|S|, |A|) matrix such as constraint costs or a
    constant one for return times.
    """

    def __init__(self, kind='live', matrices=None, name=None):
        if kind not in ('live', 'matrix'):
            raise ValueError('reward spec kind must be live or matrix')
        if kind == 'matrix' and matrices is None:
            raise ValueError('a matrix reward spec needs matrices')
        self.kind = kind
        self.matrices = None if matrices is None else [
            np.asarray(m, dtype=np.float64) for m in matrices
        ]
        self.name = name or kind

    def __repr__(self):
        return '{}(name={})'.format(self.__class__.__name__, self.name)

    @classmethod
    def live(cls):
        return cls('live', name='reward')

    @classmethod
    def costs(cls, inst, ell=0):
        return cls(
            'matrix', list(inst.constraints.functions[ell]), name='cost')

    @classmethod
    def unit(cls, inst):
        return cls(
            'matrix',
            [np.ones((c.state_count, c.action_count)) for c in inst.classes],
            name='unit')

    def mean_matrix(self, inst, i):
        if self.kind == 'live':
            return inst.classes[i].rewards
        return self.matrices[i]

    def sums(self, inst, step, counts):
        """Per-class sums of this reward over the arms of every (s, a)."""
        if self.kind == 'live':
            return pair_sums(inst, step, step.rewards)
        return [v * m for v, m in zip(counts.visits, self.matrices)]


class QTable(object):
    """Estimated taboo Q-factors of K learning processes.

    Args:
        tables (list[list[array]]): ``tables[k][i]`` of shape (|S_i|, |A_i|).
        policies (list[:obj:`LocalPolicy`]): Secondary policy per process.
        rewards (list[:obj:`RewardSpec`]): Reward spec per process.
        ergodic_states (list[int]): s0 per class.
        t (int): Shared step counter.
        steps (array, optional): Updates of table (k, i) since its
            secondary policy last changed, which drive its step size;
            ``t`` everywhere by default.
        step_size (dict | :obj:`BaseStepSize`, optional): Schedule,
            1 / (t + 1) by default.
    """

    def __init__(self,
                 tables,
                 policies,
                 rewards,
                 ergodic_states,
                 t=0,
                 step_size=None,
                 steps=None):
        if not (len(tables) == len(policies) == len(rewards)):
            raise ValueError('tables, policies and rewards must align')
        self.tables = [[np.array(q, dtype=np.float64) for q in per_class]
                       for per_class in tables]
        self.policies = list(policies)
        self.rewards = list(rewards)
        self.ergodic_states = list(ergodic_states)
        self.t = int(t)
        self.step_size = build_step_size(step_size)
        if steps is None:
            steps = np.full((len(self.tables), len(self.ergodic_states)),
                            self.t)
        self.steps = np.array(steps, dtype=np.int64)

    def __len__(self):
        return len(self.tables)

    @classmethod
    def zeros(cls, inst, policies, rewards, step_size=None):
        tables = [[np.zeros((c.state_count, c.action_count))
                   for c in inst.classes] for _ in policies]
        return cls(tables, policies, rewards,
                   [c.ergodic_state for c in inst.classes],
                   step_size=step_size)

    def replace(self, tables=None, t=None, policies=None, steps=None):
        """Copy with new parts; tables whose secondary policy changes
        restart their step counter."""
        steps = self.steps.copy() if steps is None else steps
        if policies is not None:
            for k, (old, new) in enumerate(zip(self.policies, policies)):
                for i in range(len(self.ergodic_states)):
                    if not np.array_equal(old[i], new[i]):
                        steps[k, i] = 0
        return QTable(
            self.tables if tables is None else tables,
            self.policies if policies is None else policies,
            self.rewards,
            self.ergodic_states,
            t=self.t if t is None else t,
            step_size=self.step_size,
            steps=steps)

    def continuation(self, k, i):
        """Q(s', policy(s')) with the ergodic state's entry set to 0."""
        q = self.tables[k][i]
        labels = self.policies[k][i]
        values = q[np.arange(q.shape[0]), labels].copy()
        values[self.ergodic_states[i]] = 0.0
        return values


def q_update(qt, counts, reward_sums, policies=None):
    """One empirical Q-iteration step from the live transition counts.

    For every visited (s, a) the new value mixes the old one with the
    sample mean reward plus the empirical successor average of
    Q(s', policy(s')) over s' != s0; unvisited entries are left as is.

    Args:
        qt (:obj:`QTable`): Current estimates.
        counts (:obj:`TransitionCounts`): Counts of the live step.
        reward_sums (list[list[array]]): ``reward_sums[k][i]`` per-(s, a)
            sums of the process-k reward samples.
        policies (list[:obj:`LocalPolicy`], optional): Secondary policies,
            the table's own by default.

    Returns:
        :obj:`QTable`: Updated copy with the step counter advanced.
    """
    if policies is not None:
        qt = qt.replace(policies=policies)
    steps = qt.steps.copy()
    tables = []
    for k in range(len(qt)):
        per_class = []
        for i, q in enumerate(qt.tables[k]):
            visits = counts.visits[i]
            visited = visits > 0
            if not visited.any():
                per_class.append(q.copy())
                continue
            eta = qt.step_size(steps[k, i])
            steps[k, i] += 1
            successor_sum = counts.successors[i] @ qt.continuation(k, i)
            target = np.zeros_like(q)
            target[visited] = (reward_sums[k][i][visited] +
                               successor_sum[visited]) / visits[visited]
            per_class.append(
                np.where(visited, (1.0 - eta) * q + eta * target, q))
        tables.append(per_class)
    return qt.replace(tables=tables, t=qt.t + 1, steps=steps)


def _taboo_kernel(cls, kernel):
    kernel = cls.kernels if kernel is None else np.asarray(kernel)
    masked = np.array(kernel, dtype=np.float64)
    masked[:, :, cls.ergodic_state] = 0.0
    return masked


def apply_T(cls, labels, reward_matrix, kernel, q):
    """Q'(s, a) = r(s, a) + sum_{s' != s0} p(s, a, s') Q(s', labels[s'])."""
    masked = _taboo_kernel(cls, kernel)
    labels = np.asarray(labels, dtype=np.int64)
    values = np.asarray(q)[np.arange(cls.state_count), labels]
    return np.asarray(reward_matrix) + np.einsum('ast,t->sa', masked, values)


def span(values):
    """max - min over the entries together with the terminal anchor 0."""
    values = np.asarray(values)
    return max(values.max(), 0.0) - min(values.min(), 0.0)


class FixedPointResult(object):

    def __init__(self, q, iterations, spans):
        self.q = q
        self.iterations = iterations
        self.spans = spans


def check_good_case(cls, labels, kernel=None):
    kernel = cls.kernels if kernel is None else np.asarray(kernel)
    if not np.isfinite(kernel).all():
        raise GoodCaseError('kernel has unestimated rows')
    if not reaches_state(cls.policy_kernel(labels, kernel), cls.ergodic_state):
        raise GoodCaseError(
            'ergodic state {} unreachable under labels {}'.format(
                cls.ergodic_state, np.asarray(labels).tolist()))


def solve_q_fixed_point(cls,
                        labels,
                        reward_matrix,
                        kernel=None,
                        q0=None,
                        tol=1e-10,
                        max_iter=100000,
                        check=True):
    """Value iteration on the taboo operator, stopped on the span seminorm.

    Returns:
        :obj:`FixedPointResult`: Fixed point, iteration count and the span
        of every successive difference.
    """
    if check:
        check_good_case(cls, labels, kernel)
    q = np.zeros((cls.state_count, cls.action_count)) if q0 is None else (
        np.array(q0, dtype=np.float64))
    spans = []
    for it in range(1, max_iter + 1):
        q_next = apply_T(cls, labels, reward_matrix, kernel, q)
        spans.append(span(q_next - q))
        q = q_next
        if spans[-1] < tol:
            return FixedPointResult(q, it, spans)
    raise NonConvergenceError(
        'value iteration did not reach span {} in {} iterations'.format(
            tol, max_iter))


def taboo_linear_solve(cls, labels, reward_matrix, kernel=None):
    """Direct solve of (I - P_masked) v = r_labels, expanded to Q."""
    masked = _taboo_kernel(cls, kernel)
    labels = np.asarray(labels, dtype=np.int64)
    states = np.arange(cls.state_count)
    matrix = np.eye(cls.state_count) - masked[labels, states, :]
    rhs = np.asarray(reward_matrix)[states, labels]
    if np.linalg.cond(matrix) > 1e12:
        raise SingularSystemError(
            'taboo system is singular under labels {}'.format(
                labels.tolist()))
    values = np.linalg.solve(matrix, rhs)
    return np.asarray(reward_matrix) + np.einsum('ast,t->sa', masked, values)
