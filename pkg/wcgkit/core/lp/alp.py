import numpy as np

from ..errors import IrreparableError
from ..model import build_sa_index, constraint_violation, largest_remainder

VIOLATION_TOL = 1e-9


def _group_counts(inst, sa_index, states):
    """Number of arms of every (class, state) group."""
    counts = np.zeros(sa_index.num_groups, dtype=np.int64)
    for i, cls in enumerate(inst.classes):
        start = sa_index.group_offsets[i]
        counts[start:start + cls.state_count] = np.bincount(
            np.asarray(states)[inst.arm_slice(i)], minlength=cls.state_count)
    return counts


def _cost_columns(inst, sa_index):
    """f_l(iota) of every SA label as a (labels, constraints) matrix."""
    constraints = inst.constraints
    costs = np.zeros((sa_index.total, constraints.count))
    for iota in range(sa_index.total):
        i, s, a = sa_index.label(iota)
        for ell in range(constraints.count):
            costs[iota, ell] = constraints.function(ell, i)[s, a]
    return costs


def round_alpha(inst, sa_index, alpha, group_counts, rng=None):
    """Largest-remainder action counts of every group under ``alpha``."""
    counts = np.zeros(sa_index.total, dtype=np.int64)
    for g in range(sa_index.num_groups):
        labels = np.flatnonzero(sa_index.group_of == g)
        counts[labels] = largest_remainder(alpha[labels], group_counts[g],
                                           rng)
    return counts


def repair_counts(inst, sa_index, counts, rng=None, max_swaps=None):
    """Greedy single-arm moves within groups until the constraints hold.

    Each move takes one arm of a group from one action to another and is
    chosen to reduce the total violation the most; ties are broken by
    ``rng``, or go to the first candidate move when no ``rng`` is given.

    Returns:
        tuple: (counts, number of moves).

    Raises:
        IrreparableError: No move reduces a positive violation.
    """
    counts = np.array(counts, dtype=np.int64)
    costs = _cost_columns(inst, sa_index)
    modes = inst.constraints.modes
    limits = inst.scale * np.asarray(inst.constraints.offsets)
    residuals = counts @ costs - limits
    violation = constraint_violation(residuals, modes)
    sources, targets = [], []
    for g in range(sa_index.num_groups):
        labels = np.flatnonzero(sa_index.group_of == g)
        for src in labels:
            for dst in labels:
                if src != dst:
                    sources.append(src)
                    targets.append(dst)
    sources = np.array(sources, dtype=np.int64)
    targets = np.array(targets, dtype=np.int64)
    shifts = costs[targets] - costs[sources]
    max_swaps = max_swaps if max_swaps is not None else 10 * int(counts.sum())
    swaps = 0
    while violation > VIOLATION_TOL:
        if sources.size == 0 or swaps >= max_swaps:
            raise IrreparableError(
                'constraint violation {:.6g} left after {} moves'.format(
                    violation, swaps))
        movable = counts[sources] > 0
        after = constraint_violation(residuals[None, :] + shifts, modes)
        after = np.where(movable, after, np.inf)
        best = after.min()
        if not best < violation - VIOLATION_TOL:
            raise IrreparableError(
                'no single move reduces the violation {:.6g}'.format(
                    violation))
        ties = np.flatnonzero(after <= best + VIOLATION_TOL)
        k = ties[0] if ties.size == 1 or rng is None else rng.choice(ties)
        counts[sources[k]] -= 1
        counts[targets[k]] += 1
        residuals = residuals + shifts[k]
        violation = constraint_violation(residuals, modes)
        swaps += 1
    return counts, swaps


def alp_actions(inst, alpha, states, rng=None, sa_index=None,
                return_report=False):
    """Feasible integer actions that follow the LP action distribution.

    Within every (class, state) group the action counts are the largest
    remainder rounding of alpha times the group size; greedy repair then
    restores the coupling constraints. Arms of a group take actions in
    arm order. Without ``rng`` every tie is broken in label order.

    Args:
        inst (:obj:`WcgInstance`): The system.
        alpha (array): alpha(t) over SA labels.
        states (array): Flat state vector.
        rng (:obj:`numpy.random.Generator` | int, optional): Tie breaker.
        return_report (bool): Also return a dict with the number of repair
            moves and the realized action fractions.
    """
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    sa_index = sa_index or build_sa_index(inst)
    states = np.asarray(states, dtype=np.int64)
    alpha = np.asarray(alpha, dtype=np.float64)
    group_counts = _group_counts(inst, sa_index, states)
    counts = round_alpha(inst, sa_index, alpha, group_counts, rng)
    counts, swaps = repair_counts(inst, sa_index, counts, rng)

    actions = np.zeros(inst.total_arms, dtype=np.int64)
    for i, cls in enumerate(inst.classes):
        block = np.arange(inst.total_arms)[inst.arm_slice(i)]
        for s in range(cls.state_count):
            arms = block[states[block] == s]
            labels = counts[sa_index.index(i, s, 0):sa_index.index(i, s, 0) +
                            cls.action_count]
            actions[arms] = np.repeat(np.arange(cls.action_count), labels)
    if not return_report:
        return actions
    sizes = group_counts[sa_index.group_of].astype(np.float64)
    fractions = np.where(sizes > 0, counts / np.maximum(sizes, 1.0), alpha)
    return actions, dict(swaps=swaps, fractions=fractions)
