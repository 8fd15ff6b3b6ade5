import numpy as np

from ..model import build_sa_index


def sa_transition_matrix(inst, sa_index, kernels=None):
    """Matrix of shape (SA labels, state groups) with entries p(iota, i', s').

    Args:
        kernels (list[array], optional): Per-class kernels replacing the
            instance's (estimated or perturbed models).
    """
    kernels = [c.kernels for c in inst.classes] if kernels is None else kernels
    matrix = np.zeros((sa_index.total, sa_index.num_groups))
    for iota in range(sa_index.total):
        i, s, a = sa_index.label(iota)
        start = sa_index.group_offsets[i]
        matrix[iota, start:start + sa_index.state_counts[i]] = kernels[i][a, s]
    return matrix


def state_marginal(z, sa_index):
    """Aggregate SA occupancy to (class, state) occupancy."""
    z = np.asarray(z, dtype=np.float64)
    marginal = np.zeros(z.shape[:-1] + (sa_index.num_groups, ))
    np.add.at(marginal.T, sa_index.group_of, np.moveaxis(z, -1, 0))
    return marginal


def expected_occupancy(inst, policy, z0, num_steps=None, sa_index=None,
                       kernels=None, atol=1e-9):
    """Mean-field occupancy path z(0), z(1), ... under a randomized policy.

    z(t + 1) is obtained by pushing the state marginal of z(t) through the
    kernels and splitting it over actions by alpha(t + 1).

    Args:
        inst (:obj:`WcgInstance`): System description.
        policy (:obj:`RandomizedPolicy`): Time-indexed action distributions.
        z0 (array): Initial SA occupancy on the simplex.
        num_steps (int, optional): Number of slices, ``len(policy)`` by
            default.

    Returns:
        ndarray: Shape (num_steps, SA labels).
    """
    sa_index = sa_index or build_sa_index(inst)
    z0 = np.asarray(z0, dtype=np.float64)
    if z0.shape != (sa_index.total, ):
        raise ValueError('z0 must have {} entries'.format(sa_index.total))
    if z0.min() < -atol or abs(z0.sum() - 1.0) > atol:
        raise ValueError('z0 must lie on the SA simplex')
    num_steps = len(policy) if num_steps is None else int(num_steps)
    transition = sa_transition_matrix(inst, sa_index, kernels)
    path = np.zeros((num_steps, sa_index.total))
    path[0] = z0
    for t in range(1, num_steps):
        mass = path[t - 1] @ transition
        path[t] = mass[sa_index.group_of] * policy.at(t)
    return path
