import numpy as np

from ..errors import InconsistentInitialError
from ..model import RandomizedPolicy, build_sa_index
from .problem import LpProblem

INITIAL_MODES = ('sa', 'state')


class ConversionMaps(object):
    """Diagonal maps between occupancy z and per-class LP marginals x.

    x_iota = (sum_i N_i^0 / N^0_{i_iota}) z_iota, so every class of x sums to
    one; ``aggregation`` maps SA occupancy to (class, state) occupancy.
    """

    def __init__(self, inst, sa_index=None):
        self.sa_index = sa_index or build_sa_index(inst)
        base = inst.base_counts.astype(np.float64)
        self.x_scale = base.sum() / base[self.sa_index.class_of]
        self.aggregation = self.sa_index.aggregation_matrix()

    def to_x(self, z):
        return np.asarray(z, dtype=np.float64) * self.x_scale

    def to_z(self, x):
        return np.asarray(x, dtype=np.float64) / self.x_scale

    def state_occupancy(self, z):
        return np.asarray(z, dtype=np.float64) @ self.aggregation


def check_initial(x0, sa_index, atol=1e-9):
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (sa_index.total, ):
        raise InconsistentInitialError('x0 must have {} entries'.format(
            sa_index.total))
    sums = np.bincount(
        sa_index.class_of, weights=x0, minlength=len(sa_index.state_counts))
    if x0.min() < -atol or np.abs(sums - 1.0).max() > atol:
        raise InconsistentInitialError(
            'x0 must be nonnegative and sum to one per class, class sums '
            '{}'.format(sums.tolist()))
    return x0


def initial_marginal(inst, sa_index=None, states=None):
    """x0 with all mass of each (class, state) on the passive action."""
    sa_index = sa_index or build_sa_index(inst)
    x0 = np.zeros(sa_index.total)
    for i, cls in enumerate(inst.classes):
        if states is None:
            dist = np.asarray(cls.initial_distribution)
        else:
            block = np.asarray(states)[inst.arm_slice(i)]
            dist = np.bincount(
                block, minlength=cls.state_count) / float(block.size)
        for s in range(cls.state_count):
            x0[sa_index.index(i, s, 0)] = dist[s]
    return x0


def build_lp(inst,
             x0,
             horizon,
             initial='sa',
             kernels=None,
             rewards=None,
             sa_index=None):
    """Finite-horizon occupancy LP of the relaxed system.

    Variables x_{iota,t}, t = 0..T, are laid out slice by slice at
    ``t * total + iota``. Rows are the flow conservation of every
    (class, state) for t < T, the per-class normalization of every slice,
    one coupling row sum_iota N^0 f x <= | = b per (constraint, t), and,
    with ``initial='state'``, the state marginals of x0 at t = 0.

    Args:
        inst (:obj:`WcgInstance`): The system.
        x0 (array): Initial per-class marginal over SA labels.
        horizon (int): T.
        initial (str): 'sa' fixes the whole first slice to x0 through its
            bounds; 'state' only fixes its state marginals.
        kernels (list[array], optional): Per-class kernels to use instead
            of the true ones.
        rewards (list[array], optional): Per-class mean rewards likewise.

    Returns:
        :obj:`LpProblem`
    """
    if initial not in INITIAL_MODES:
        raise ValueError('initial must be one of {}'.format(INITIAL_MODES))
    sa_index = sa_index or build_sa_index(inst)
    x0 = check_initial(x0, sa_index)
    horizon = int(horizon)
    kernels = [c.kernels for c in inst.classes] if kernels is None else [
        np.asarray(k, dtype=np.float64) for k in kernels
    ]
    rewards = [c.rewards for c in inst.classes] if rewards is None else [
        np.asarray(r, dtype=np.float64) for r in rewards
    ]
    total = sa_index.total
    num_vars = total * (horizon + 1)
    base = inst.base_counts.astype(np.float64)
    classes, states, actions = (sa_index.class_of, sa_index.state_of,
                                sa_index.action_of)

    slice_c = np.array([
        base[i] * rewards[i][s, a]
        for i, s, a in zip(classes, states, actions)
    ])
    c = np.tile(slice_c, horizon + 1)

    rows, rhs, senses, row_names = [], [], [], []

    def add(row, value, sense, name):
        rows.append(row)
        rhs.append(value)
        senses.append(sense)
        row_names.append(name)

    for t in range(horizon):
        for i, cls in enumerate(inst.classes):
            for s_next in range(cls.state_count):
                row = np.zeros(num_vars)
                block = sa_index.class_block(i)
                iotas = np.arange(block.start, block.stop)
                row[t * total + iotas] = kernels[i][actions[iotas],
                                                    states[iotas], s_next]
                for a in range(cls.action_count):
                    row[(t + 1) * total + sa_index.index(i, s_next, a)] -= 1.0
                add(row, 0.0, 'eq', 'flow_t{}_c{}_s{}'.format(t, i, s_next))
    for t in range(horizon + 1):
        for i in range(inst.num_classes):
            row = np.zeros(num_vars)
            block = sa_index.class_block(i)
            row[t * total + block.start:t * total + block.stop] = 1.0
            add(row, 1.0, 'eq', 'norm_t{}_c{}'.format(t, i))
    constraints = inst.constraints
    for t in range(horizon + 1):
        for ell in range(constraints.count):
            row = np.zeros(num_vars)
            for iota in range(total):
                i, s, a = sa_index.label(iota)
                row[t * total + iota] = base[i] * constraints.function(
                    ell, i)[s, a]
            add(row, float(constraints.offsets[ell]), constraints.modes[ell],
                'couple_t{}_l{}'.format(t, ell))

    bounds = np.tile([0.0, 1.0], (num_vars, 1))
    if initial == 'sa':
        bounds[:total, 0] = x0
        bounds[:total, 1] = x0
    else:
        marginal = np.zeros(sa_index.num_groups)
        np.add.at(marginal, sa_index.group_of, x0)
        for g in range(sa_index.num_groups):
            row = np.zeros(num_vars)
            row[:total][sa_index.group_of == g] = 1.0
            add(row, marginal[g], 'eq', 'init_g{}'.format(g))

    names = [
        'x_t{}_c{}_s{}_a{}'.format(t, i, s, a) for t in range(horizon + 1)
        for i, s, a in zip(classes, states, actions)
    ]
    return LpProblem(
        c,
        np.array(rows).reshape(-1, num_vars),
        rhs,
        senses=senses,
        bounds=bounds,
        sense='max',
        names=names,
        row_names=row_names,
        meta=dict(
            sa_index=sa_index,
            horizon=horizon,
            x0=x0,
            initial=initial,
            base_counts=base))


def policy_from_x(solution, sa_index=None, atol=1e-12):
    """Randomized policy alpha(t) = x_t / (state marginal of x_t).

    Groups with (numerically) zero state marginal act uniformly.
    """
    solution.check()
    sa_index = sa_index or solution.problem.meta['sa_index']
    slices = np.clip(
        solution.x_float().reshape(-1, sa_index.total), 0.0, None)
    marginal = np.zeros((slices.shape[0], sa_index.num_groups))
    np.add.at(marginal.T, sa_index.group_of, slices.T)
    widths = np.asarray(sa_index.action_counts)[sa_index.class_of]
    denominator = marginal[:, sa_index.group_of]
    positive = denominator > atol
    alpha = np.where(positive, slices / np.where(positive, denominator, 1.0),
                     1.0 / widths)
    return RandomizedPolicy(alpha, sa_index)
