from fractions import Fraction

import numpy as np

FEASIBILITY_TOL = 1e-9


def _check_vectors(inst, states, actions):
    states = np.asarray(states, dtype=np.int64)
    actions = np.asarray(actions, dtype=np.int64)
    if states.shape != (inst.total_arms, ) or actions.shape != states.shape:
        raise ValueError(
            'expected state and action vectors of length {}, got {} and {}'.
            format(inst.total_arms, states.shape, actions.shape))
    return states, actions


def eval_constraints(inst, states, actions):
    """Residuals sum_{i,n} f_{i,l}(s, a) - h * b_l of every constraint."""
    states, actions = _check_vectors(inst, states, actions)
    constraints = inst.constraints
    residuals = np.zeros(constraints.count)
    for ell in range(constraints.count):
        total = 0.0
        for i in range(inst.num_classes):
            block = inst.arm_slice(i)
            f = constraints.function(ell, i)
            total += f[states[block], actions[block]].sum()
        residuals[ell] = total - inst.scale * constraints.offsets[ell]
    return residuals


def constraint_violation(residuals, modes):
    """Total violation: |res| for equalities, positive part otherwise."""
    residuals = np.asarray(residuals, dtype=np.float64)
    equality = np.array([mode == 'eq' for mode in modes], dtype=bool)
    violation = np.where(equality, np.abs(residuals),
                         np.maximum(residuals, 0.0))
    return violation.sum(axis=-1)


def is_feasible(inst, residuals, tol=FEASIBILITY_TOL):
    return bool(
        constraint_violation(residuals, inst.constraints.modes) <= tol)


def occupancy_counts(inst, sa_index, states, actions):
    """Number of arms in every SA label."""
    states, actions = _check_vectors(inst, states, actions)
    labels = sa_index.arm_labels(inst, states, actions)
    return np.bincount(labels, minlength=sa_index.total)


def occupancy_from_state(inst, sa_index, states, actions, exact=False):
    """Occupancy Z: fraction of all arms in every SA label.

    Args:
        exact (bool): Return :obj:`fractions.Fraction` entries whose sum is
            exactly one instead of floats.
    """
    counts = occupancy_counts(inst, sa_index, states, actions)
    if exact:
        return [Fraction(int(c), inst.total_arms) for c in counts]
    return counts / float(inst.total_arms)
