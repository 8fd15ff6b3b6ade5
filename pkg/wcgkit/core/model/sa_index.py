import numpy as np


class SaIndex(object):
    """Lexicographic labeling iota <-> (i, s, a) of all state-action pairs.

    State groups g <-> (i, s) are labeled the same way and are used by the
    aggregation matrix from SA occupancy to state occupancy.
    """

    def __init__(self, state_counts, action_counts):
        self.state_counts = tuple(int(n) for n in state_counts)
        self.action_counts = tuple(int(n) for n in action_counts)
        class_of, state_of, action_of, group_of = [], [], [], []
        group = 0
        for i, (num_states, num_actions) in enumerate(
                zip(self.state_counts, self.action_counts)):
            for s in range(num_states):
                for a in range(num_actions):
                    class_of.append(i)
                    state_of.append(s)
                    action_of.append(a)
                    group_of.append(group)
                group += 1
        self.class_of = self._freeze(class_of)
        self.state_of = self._freeze(state_of)
        self.action_of = self._freeze(action_of)
        self.group_of = self._freeze(group_of)
        self.num_groups = group
        sizes = [s * a for s, a in zip(self.state_counts, self.action_counts)]
        self.class_offsets = self._freeze(np.concatenate([[0],
                                                          np.cumsum(sizes)]))
        self.group_offsets = self._freeze(
            np.concatenate([[0], np.cumsum(self.state_counts)]))

    @staticmethod
    def _freeze(values):
        array = np.array(values, dtype=np.int64)
        array.setflags(write=False)
        return array

    def __repr__(self):
        return '{}(total={})'.format(self.__class__.__name__, self.total)

    def __len__(self):
        return self.total

    @property
    def total(self):
        return int(self.class_of.size)

    def index(self, i, s, a):
        if not (0 <= s < self.state_counts[i]
                and 0 <= a < self.action_counts[i]):
            raise KeyError('({}, {}, {}) is not a valid SA pair'.format(
                i, s, a))
        return int(self.class_offsets[i] + s * self.action_counts[i] + a)

    def label(self, iota):
        return (int(self.class_of[iota]), int(self.state_of[iota]),
                int(self.action_of[iota]))

    def group(self, i, s):
        return int(self.group_offsets[i] + s)

    def class_block(self, i):
        return slice(self.class_offsets[i], self.class_offsets[i + 1])

    def arm_labels(self, inst, states, actions):
        """SA label of every arm, vectorized over the flat arm vectors."""
        offsets = self.class_offsets[inst.arm_class]
        widths = np.asarray(self.action_counts)[inst.arm_class]
        return offsets + np.asarray(states) * widths + np.asarray(actions)

    def aggregation_matrix(self):
        """0/1 matrix of shape (total, num_groups) mapping iota to (i, s)."""
        agg = np.zeros((self.total, self.num_groups))
        agg[np.arange(self.total), self.group_of] = 1.0
        return agg


def build_sa_index(inst):
    return SaIndex([c.state_count for c in inst.classes],
                   [c.action_count for c in inst.classes])
