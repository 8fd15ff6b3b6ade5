import itertools
import math
from collections import deque

import numpy as np

ROW_ATOL = 1e-12
MAX_ENUMERATED_POLICIES = 4096


class ValidationReport(object):
    """Collected invariant violations of an instance.

    Each violation is a (code, message) pair; the report is empty iff the
    instance is well formed.
    """

    def __init__(self):
        self.violations = []

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    def __bool__(self):
        return not self.violations

    __nonzero__ = __bool__

    @property
    def is_valid(self):
        return not self.violations

    def add(self, code, message):
        self.violations.append((code, message))

    def codes(self):
        return [code for code, _ in self.violations]

    def table_data(self):
        data = [['code', 'message']]
        data.extend([code, message] for code, message in self.violations)
        return data


def _support_successors(kernel_rows):
    return [np.flatnonzero(row > 0) for row in kernel_rows]


def _distances_to(target, successors):
    """Shortest number of steps from every state to ``target``."""
    num_states = len(successors)
    predecessors = [[] for _ in range(num_states)]
    for s, succ in enumerate(successors):
        for s_next in succ:
            predecessors[s_next].append(s)
    dist = np.full(num_states, -1, dtype=np.int64)
    dist[target] = 0
    queue = deque([target])
    while queue:
        s = queue.popleft()
        for s_prev in predecessors[s]:
            if dist[s_prev] < 0:
                dist[s_prev] = dist[s] + 1
                queue.append(s_prev)
    return dist


def chain_period(successors, root):
    """Period of the class of ``root``: gcd of cycle lengths through it."""
    level = {root: 0}
    queue = deque([root])
    while queue:
        s = queue.popleft()
        for s_next in successors[s]:
            if s_next not in level:
                level[s_next] = level[s] + 1
                queue.append(s_next)
    period = 0
    for s in level:
        for s_next in successors[s]:
            period = math.gcd(period, level[s] + 1 - level[s_next])
    return abs(period)


def check_ergodic(cls, labels, max_T=None):
    """Whether ``labels`` makes the ergodic state reachable and aperiodic.

    Args:
        cls (:obj:`BanditClass`): The gang.
        labels (array): Action label per state.
        max_T (int, optional): Reachability horizon, |S| by default.

    Returns:
        bool: True iff every state reaches s0 within ``max_T`` steps with
        positive probability and the chain through s0 is aperiodic.
    """
    max_T = cls.state_count if max_T is None else max_T
    successors = _support_successors(cls.policy_kernel(labels))
    dist = _distances_to(cls.ergodic_state, successors)
    if (dist < 0).any() or dist.max() > max_T:
        return False
    return chain_period(successors, cls.ergodic_state) == 1


def enumerate_policies(cls):
    """All deterministic label vectors of a class, lexicographically."""
    return itertools.product(
        range(cls.action_count), repeat=cls.state_count)


def trap_states(cls):
    """States from which some policy avoids s0 forever."""
    alive = np.ones(cls.state_count, dtype=bool)
    alive[cls.ergodic_state] = False
    changed = True
    while changed:
        changed = False
        for s in np.flatnonzero(alive):
            support = cls.kernels[:, s, :] > 0
            keeps = [(~alive[support[a]]).sum() == 0
                     for a in range(cls.action_count)]
            if not any(keeps):
                alive[s] = False
                changed = True
    return np.flatnonzero(alive)


def _check_class(report, i, cls):
    kernels = cls.kernels
    if (kernels < 0).any() or (kernels > 1).any():
        report.add('kernel-range',
                   'class {}: kernel entries outside [0, 1]'.format(i))
    row_sums = kernels.sum(axis=2)
    for a, s in zip(*np.nonzero(np.abs(row_sums - 1.0) > ROW_ATOL)):
        report.add(
            'kernel-row',
            'class {}, action {}, state {}: row sums to {:.12g}'.format(
                i, a, s, row_sums[a, s]))
    if not np.isfinite(cls.rewards).all():
        report.add('reward-finite', 'class {}: non-finite rewards'.format(i))
    law = cls.reward_law
    if law.half_width < 0 or law.sigma <= 0 or law.clip <= 0:
        report.add('reward-law',
                   'class {}: invalid {} law parameters'.format(i, law.type))
    if not 0 <= cls.ergodic_state < cls.state_count:
        report.add('ergodic-state',
                   'class {}: ergodic state {} out of range'.format(
                       i, cls.ergodic_state))
    init = cls.initial_distribution
    if init.shape != (cls.state_count, ) or (init < 0).any() or abs(
            init.sum() - 1.0) > 1e-9:
        report.add('initial-distribution',
                   'class {}: initial distribution is not a distribution'.
                   format(i))


def _check_constraints(report, inst):
    constraints = inst.constraints
    for ell, per_class in enumerate(constraints.functions):
        if len(per_class) != inst.num_classes:
            report.add('constraint-shape',
                       'constraint {}: expected {} classes'.format(
                           ell, inst.num_classes))
            continue
        for i, (f, cls) in enumerate(zip(per_class, inst.classes)):
            if f.shape != (cls.state_count, cls.action_count):
                report.add('constraint-shape',
                           'constraint {}, class {}: shape {}'.format(
                               ell, i, f.shape))
            elif not np.isfinite(f).all():
                report.add('constraint-finite',
                           'constraint {}, class {}: non-finite'.format(
                               ell, i))
    if not constraints.budget:
        return
    if constraints.count != 1:
        report.add('multi-gear order',
                   'a budget constraint must be the only constraint')
        return
    for i, f in enumerate(constraints.functions[0]):
        if np.abs(f - f[0]).max() > 0:
            report.add('multi-gear order',
                       'class {}: budget cost depends on the state'.format(i))
        costs = f[0]
        if costs[0] < 0 or (np.diff(costs) <= 0).any():
            report.add(
                'multi-gear order',
                'class {}: costs {} are not strictly increasing from a '
                'nonnegative passive cost'.format(i, costs.tolist()))


def _check_ergodicity(report, i, cls):
    trapped = trap_states(cls)
    if trapped.size:
        report.add(
            'ergodicity',
            'class {}: some policy keeps states {} away from s0'.format(
                i, trapped.tolist()))
        return
    if cls.action_count**cls.state_count > MAX_ENUMERATED_POLICIES:
        return
    for labels in enumerate_policies(cls):
        if not check_ergodic(cls, labels):
            report.add(
                'ergodicity', 'class {}: policy {} is periodic'.format(
                    i, list(labels)))
            return


def validate_instance(inst, check_ergodicity=False):
    """Report every invariant violation of ``inst``.

    Args:
        inst (:obj:`WcgInstance`): Instance to check.
        check_ergodicity (bool): Also check that s0 is reachable under
            every policy and, for small classes, that every deterministic
            policy is aperiodic.

    Returns:
        :obj:`ValidationReport`
    """
    report = ValidationReport()
    for i, cls in enumerate(inst.classes):
        _check_class(report, i, cls)
    if (inst.base_counts < 1).any():
        report.add('counts', 'base counts must be positive')
    if not 0 < inst.discount <= 1:
        report.add('discount', 'discount {} outside (0, 1]'.format(
            inst.discount))
    if inst.horizon is not None and inst.horizon < 0:
        report.add('horizon', 'negative horizon')
    _check_constraints(report, inst)
    if check_ergodicity and report.is_valid:
        for i, cls in enumerate(inst.classes):
            _check_ergodicity(report, i, cls)
    return report


def ergodic_local_policy(cls):
    """Some deterministic ergodic policy of the class, or None."""
    for labels in enumerate_policies(cls):
        if check_ergodic(cls, labels):
            return np.asarray(labels)
    return None


def reaches_state(policy_matrix, target):
    """Whether every state reaches ``target`` on the positive support."""
    successors = _support_successors(np.asarray(policy_matrix))
    return bool((_distances_to(target, successors) >= 0).all())


def stationary_distribution(policy_matrix):
    """Stationary distribution of a unichain transition matrix."""
    matrix = np.asarray(policy_matrix, dtype=np.float64)
    num_states = matrix.shape[0]
    system = np.vstack([matrix.T - np.eye(num_states), np.ones(num_states)])
    rhs = np.zeros(num_states + 1)
    rhs[-1] = 1.0
    pi, _, rank, _ = np.linalg.lstsq(system, rhs, rcond=None)
    if rank < num_states:
        raise np.linalg.LinAlgError('chain has several recurrent classes')
    return np.clip(pi, 0.0, None) / np.clip(pi, 0.0, None).sum()
