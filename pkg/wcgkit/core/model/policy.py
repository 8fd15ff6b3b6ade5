import numpy as np


class LocalPolicy(object):
    """Per-class deterministic maps from states to action labels.

    Args:
        labels (list[array]): ``labels[i][s]`` is the action label of
            class i at state s (0 is passive).
    """

    def __init__(self, labels):
        self.labels = tuple(self._freeze(v) for v in labels)

    @staticmethod
    def _freeze(values):
        array = np.array(values, dtype=np.int64).reshape(-1)
        array.setflags(write=False)
        return array

    def __repr__(self):
        return '{}({})'.format(self.__class__.__name__,
                               [v.tolist() for v in self.labels])

    def __getitem__(self, i):
        return self.labels[i]

    def __len__(self):
        return len(self.labels)

    def __eq__(self, other):
        return isinstance(other, LocalPolicy) and len(self) == len(
            other) and all(
                np.array_equal(a, b) for a, b in zip(self.labels,
                                                     other.labels))

    def __hash__(self):
        return hash(tuple(tuple(v.tolist()) for v in self.labels))

    def check(self, inst):
        """Raise ValueError unless the map is total and in range."""
        if len(self.labels) != inst.num_classes:
            raise ValueError('expected {} classes, got {}'.format(
                inst.num_classes, len(self.labels)))
        for i, (cls, labels) in enumerate(zip(inst.classes, self.labels)):
            if labels.size != cls.state_count:
                raise ValueError('class {}: expected {} labels, got {}'.format(
                    i, cls.state_count, labels.size))
            if labels.min() < 0 or labels.max() >= cls.action_count:
                raise ValueError(
                    'class {}: action label out of range'.format(i))

    def actions(self, inst, states):
        """Flat action vector for the flat state vector."""
        actions = np.empty_like(states)
        for i in range(inst.num_classes):
            block = inst.arm_slice(i)
            actions[block] = self.labels[i][states[block]]
        return actions

    @classmethod
    def constant(cls, inst, label=0):
        return cls([
            np.full(c.state_count, min(label, c.action_count - 1))
            for c in inst.classes
        ])

    @classmethod
    def highest(cls, inst):
        return cls([
            np.full(c.state_count, c.action_count - 1) for c in inst.classes
        ])


class RandomizedPolicy(object):
    """Time-indexed action distributions alpha_iota(t) over SA labels.

    Args:
        alpha (array): Shape (num_steps, total SA labels); rows of each
            (i, s) group sum to one.
        sa_index (:obj:`SaIndex`): Labeling of the columns.
        atol (float): Normalization tolerance.
    """

    def __init__(self, alpha, sa_index, atol=1e-10):
        alpha = np.array(alpha, dtype=np.float64)
        if alpha.ndim == 1:
            alpha = alpha[None, :]
        if alpha.shape[1] != sa_index.total:
            raise ValueError('alpha has {} columns, expected {}'.format(
                alpha.shape[1], sa_index.total))
        if alpha.min() < -atol or alpha.max() > 1 + atol:
            raise ValueError('alpha entries must lie in [0, 1]')
        sums = np.zeros((alpha.shape[0], sa_index.num_groups))
        np.add.at(sums.T, sa_index.group_of, alpha.T)
        if np.abs(sums - 1.0).max() > atol:
            raise ValueError(
                'alpha rows are not normalized within {}'.format(atol))
        self.alpha = np.clip(alpha, 0.0, 1.0)
        self.alpha.setflags(write=False)
        self.sa_index = sa_index

    def __len__(self):
        return self.alpha.shape[0]

    @property
    def horizon(self):
        return self.alpha.shape[0] - 1

    def at(self, t):
        """alpha(t); times past the horizon reuse the last row."""
        return self.alpha[min(int(t), self.alpha.shape[0] - 1)]

    def sample(self, inst, states, t, rng):
        """Draw each arm's action independently from alpha(t)."""
        row = self.at(t)
        actions = np.empty_like(states)
        for i, cls in enumerate(inst.classes):
            block = inst.arm_slice(i)
            probs = row[self.sa_index.class_block(i)].reshape(
                cls.state_count, cls.action_count)
            cdf = np.cumsum(probs, axis=1)[states[block]]
            u = rng.random(cdf.shape[0])
            actions[block] = np.minimum((u[:, None] >= cdf).sum(axis=1),
                                        cls.action_count - 1)
        return actions

    @classmethod
    def uniform(cls, sa_index, num_steps=1):
        widths = np.asarray(sa_index.action_counts)[sa_index.class_of]
        return cls(np.tile(1.0 / widths, (num_steps, 1)), sa_index)

    @classmethod
    def from_local(cls, policy, sa_index, num_steps=1):
        alpha = np.zeros(sa_index.total)
        for iota in range(sa_index.total):
            i, s, a = sa_index.label(iota)
            alpha[iota] = float(policy[i][s] == a)
        return cls(np.tile(alpha, (num_steps, 1)), sa_index)
