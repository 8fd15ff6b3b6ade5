import numpy as np

BUDGET_TOL = 1e-12


def _index_matrices(tables):
    return [
        t.index_matrix() if hasattr(t, 'index_matrix') else np.asarray(t)
        for t in tables
    ]


def mp_assemble_actions(inst, tables, states, rng=None):
    """MP index decision: upgrade arms by decreasing index within budget.

    All arms start passive. Candidates (arm, label >= 1) are scanned in
    order of decreasing nu_i(state, label), ties in a uniform random
    order drawn from ``rng``, or in arm order when no ``rng`` is given.
    A candidate is applied when it raises the arm's current label and the
    total cost stays within the budget.

    Args:
        inst (:obj:`WcgInstance`): Instance with a budget constraint.
        tables (list): Per class :obj:`MpIndexTable` or (|S|, |A|) index
            matrix.
        states (array): Flat state vector.
        rng (:obj:`numpy.random.Generator` | int, optional): Tie breaker.

    Returns:
        ndarray: Flat action vector.
    """
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    states = np.asarray(states, dtype=np.int64)
    matrices = _index_matrices(tables)
    constraints = inst.constraints
    costs = [np.asarray(constraints.costs(i)) for i in range(inst.num_classes)]
    arm_costs = np.concatenate([
        np.full(int(inst.counts[i]), c[0]) for i, c in enumerate(costs)
    ])
    actions = np.zeros(inst.total_arms, dtype=np.int64)
    slack = inst.budget_limit() - arm_costs.sum()

    arms, labels, nus = [], [], []
    for i, cls in enumerate(inst.classes):
        block = np.arange(inst.total_arms)[inst.arm_slice(i)]
        for a in range(1, cls.action_count):
            arms.append(block)
            labels.append(np.full(block.size, a))
            nus.append(matrices[i][states[block], a])
    if not arms:
        return actions
    arms = np.concatenate(arms)
    labels = np.concatenate(labels)
    nus = np.concatenate(nus)
    ties = np.arange(nus.size) if rng is None else rng.random(nus.size)
    order = np.lexsort((ties, -nus))

    class_of = inst.arm_class
    steps = [np.diff(c) for c in costs]
    min_step = min([s.min() for s in steps if s.size] or [np.inf])
    for k in order:
        if slack < min_step - BUDGET_TOL:
            break
        n, a = arms[k], labels[k]
        current = actions[n]
        if a <= current:
            continue
        delta = costs[class_of[n]][a] - costs[class_of[n]][current]
        if delta <= slack + BUDGET_TOL:
            actions[n] = a
            slack -= delta
    return actions
