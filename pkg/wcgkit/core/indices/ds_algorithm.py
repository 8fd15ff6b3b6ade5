import logging

import numpy as np

from ..errors import ErgodicityError, SingularSystemError
from .policy_value import cost_matrix, policy_value

logger = logging.getLogger(__name__)

PCL_TOL = 1e-10
TIE_TOL = 1e-12


def downshift(labels, state):
    """Copy of ``labels`` with the label of ``state`` lowered by one."""
    labels = np.array(labels, dtype=np.int64)
    if labels[state] < 1:
        raise ValueError('state {} is already passive'.format(state))
    labels[state] -= 1
    return labels


def index_ratio(before, after, atol=1e-14):
    """(Gamma - Gamma') / (Omega - Omega'), 0 when the costs coincide."""
    d_omega = before.omega - after.omega
    if abs(d_omega) <= atol:
        return 0.0
    return (before.gamma - after.gamma) / d_omega


class MpIndexTable(object):
    """Downshift trajectory of one class and the indices found along it.

    Args:
        entries (list[tuple]): (s_m, labels_m, nu_m) in discovery order;
            the index belongs to the pair (s_m, labels_m[s_m]).
        state_count (int): |S|.
        action_count (int): |A|.
        cls_index (int, optional): Class position, used in exports.
    """

    def __init__(self, entries, state_count, action_count, cls_index=None):
        self.entries = [(int(s), np.asarray(labels, dtype=np.int64),
                         float(nu)) for s, labels, nu in entries]
        self.state_count = state_count
        self.action_count = action_count
        self.cls_index = cls_index

    def __len__(self):
        return len(self.entries)

    @property
    def indices(self):
        return np.array([nu for _, _, nu in self.entries])

    @property
    def pcl(self):
        """Whether the index sequence is nonincreasing."""
        nus = self.indices
        return bool((np.diff(nus) <= PCL_TOL).all())

    def index_matrix(self):
        """nu(s, a) for labels a >= 1; NaN in the passive column."""
        matrix = np.full((self.state_count, self.action_count), np.nan)
        for s, labels, nu in self.entries:
            matrix[s, labels[s]] = nu
        return matrix

    def ranking(self):
        """States in the order their indices were found."""
        return [s for s, _, _ in self.entries]

    def to_dict(self):
        return dict(
            cls=self.cls_index,
            pcl=self.pcl,
            state_count=self.state_count,
            action_count=self.action_count,
            entries=[
                dict(m=m, s=s, labels=labels.tolist(), a=int(labels[s]), nu=nu)
                for m, (s, labels, nu) in enumerate(self.entries, start=1)
            ])

    @classmethod
    def from_dict(cls, cfg):
        entries = [(e['s'], e['labels'], e['nu']) for e in cfg['entries']]
        return cls(entries, cfg['state_count'], cfg['action_count'],
                   cfg.get('cls'))


def ds_adaptive_greedy(cls, costs, rng=None, cls_index=None):
    """Downshift adaptive-greedy computation of the MP indices of a class.

    Starting from the all-highest labels, every round evaluates the index
    ratio of downshifting each non-passive state, records the state with
    the largest ratio and downshifts it, until every label is passive.
    Ties go to a uniform draw from ``rng``, the lowest state when it is
    None.

    Args:
        cls (:obj:`BanditClass`): The gang.
        costs (array): Per-action costs or the (|S|, |A|) constraint
            function.
        rng (:obj:`numpy.random.Generator`, optional): Tie breaker.

    Returns:
        :obj:`MpIndexTable`

    Raises:
        ErgodicityError: An intermediate policy does not return to s0.
    """
    costs = cost_matrix(cls, costs)
    cache = dict()

    def evaluate(labels):
        key = tuple(labels.tolist())
        if key not in cache:
            try:
                cache[key] = policy_value(cls, labels, costs)
            except SingularSystemError as err:
                raise ErgodicityError(
                    'labels {}: {}'.format(list(key), err), labels=list(key))
        return cache[key]

    labels = np.full(cls.state_count, cls.action_count - 1, dtype=np.int64)
    entries = []
    while (labels >= 1).any():
        current = evaluate(labels)
        candidates = np.flatnonzero(labels >= 1)
        ratios = np.array([
            index_ratio(current, evaluate(downshift(labels, s)))
            for s in candidates
        ])
        best = np.flatnonzero(ratios >= ratios.max() - TIE_TOL)
        pick = best[0] if rng is None or best.size == 1 else rng.choice(best)
        state = int(candidates[pick])
        entries.append((state, labels.copy(), ratios[pick]))
        labels = downshift(labels, state)
    table = MpIndexTable(entries, cls.state_count, cls.action_count,
                         cls_index)
    logger.debug('class %s indices %s (pcl=%s)', cls_index,
                 np.round(table.indices, 6).tolist(), table.pcl)
    return table


def ds_indices(inst, rng=None):
    """MP index tables of every class under the instance's budget."""
    return [
        ds_adaptive_greedy(
            cls, inst.constraints.costs(i), rng=rng, cls_index=i)
        for i, cls in enumerate(inst.classes)
    ]
