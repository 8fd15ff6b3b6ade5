import numpy as np


class TransitionCounts(object):
    """Per-class visit and successor counts of one live step.

    ``visits[i][s, a]`` is the number of class-i arms in (s, a) at t and
    ``successors[i][s, a, s']`` how many of them moved to s'.
    """

    def __init__(self, visits, successors, t=None):
        self.visits = list(visits)
        self.successors = list(successors)
        self.t = t

    def __len__(self):
        return len(self.visits)


def collect_counts(inst, step):
    """Exact per-(s, a, s') counts over all arms of a :obj:`StepData`."""
    visits, successors = [], []
    for i, cls in enumerate(inst.classes):
        block = inst.arm_slice(i)
        num_states, num_actions = cls.state_count, cls.action_count
        s = step.states[block]
        a = step.actions[block]
        s_next = step.next_states[block]
        flat = (s * num_actions + a) * num_states + s_next
        succ = np.bincount(
            flat, minlength=num_states * num_actions * num_states).reshape(
                num_states, num_actions, num_states)
        successors.append(succ)
        visits.append(succ.sum(axis=2))
    return TransitionCounts(visits, successors, t=step.t)


def pair_sums(inst, step, values):
    """Per-class (|S|, |A|) sums of a per-arm quantity over arms at t."""
    sums = []
    for i, cls in enumerate(inst.classes):
        block = inst.arm_slice(i)
        flat = step.states[block] * cls.action_count + step.actions[block]
        sums.append(
            np.bincount(
                flat,
                weights=np.asarray(values, dtype=np.float64)[block],
                minlength=cls.state_count * cls.action_count).reshape(
                    cls.state_count, cls.action_count))
    return sums
