import mmcv
import numpy as np

from .bandit import BanditClass
from .constraints import ConstraintSet


class WcgInstance(object):
    """A weakly coupled gang system at scale h.

    Args:
        classes (list[:obj:`BanditClass`]): The I gangs.
        base_counts (list[int]): N_i^0 per gang.
        constraints (:obj:`ConstraintSet`, optional): Coupling constraints,
            a trivial f = 0 constraint when omitted.
        scale (int): Scaling parameter h, so that N_i = h * N_i^0.
        horizon (int, optional): Finite horizon T, None when unbounded.
        discount (float): Discount factor in (0, 1].
    """

    def __init__(self,
                 classes,
                 base_counts,
                 constraints=None,
                 scale=1,
                 horizon=None,
                 discount=1.0):
        self.classes = tuple(classes)
        if len(self.classes) < 1:
            raise ValueError('an instance needs at least one class')
        self.base_counts = np.array(base_counts, dtype=np.int64)
        self.base_counts.setflags(write=False)
        if self.base_counts.shape != (len(self.classes), ):
            raise ValueError('expected {} base counts, got {}'.format(
                len(self.classes), self.base_counts.shape))
        self.constraints = (
            constraints if constraints is not None else
            ConstraintSet.empty(self.classes))
        if int(scale) != scale or scale < 1:
            raise ValueError('scale must be a positive integer, got {}'.format(
                scale))
        self.scale = int(scale)
        self.horizon = None if horizon is None else int(horizon)
        self.discount = float(discount)

        counts = self.scale * self.base_counts
        self.counts = counts
        self.counts.setflags(write=False)
        self.class_offsets = np.concatenate([[0], np.cumsum(counts)])
        self.class_offsets.setflags(write=False)
        self.arm_class = np.repeat(np.arange(len(self.classes)), counts)
        self.arm_class.setflags(write=False)

    def __repr__(self):
        return '{}(classes={}, base_counts={}, scale={})'.format(
            self.__class__.__name__, len(self.classes),
            self.base_counts.tolist(), self.scale)

    @property
    def num_classes(self):
        return len(self.classes)

    @property
    def total_arms(self):
        return int(self.counts.sum())

    def arm_slice(self, i):
        return slice(self.class_offsets[i], self.class_offsets[i + 1])

    def rescale(self, scale):
        """Same gangs and constraints at another scale h."""
        return WcgInstance(
            self.classes,
            self.base_counts,
            constraints=self.constraints,
            scale=scale,
            horizon=self.horizon,
            discount=self.discount)

    def budget_limit(self):
        return self.constraints.limit(self.scale)

    def to_dict(self):
        classes = []
        for cls, base_count in zip(self.classes, self.base_counts):
            cfg = cls.to_dict()
            cfg['base_count'] = int(base_count)
            classes.append(cfg)
        return dict(
            scale=self.scale,
            horizon=self.horizon,
            discount=self.discount,
            classes=classes,
            constraints=self.constraints.to_dict())

    @classmethod
    def from_dict(cls, cfg):
        classes = [BanditClass.from_dict(c) for c in cfg['classes']]
        base_counts = [c.get('base_count', 1) for c in cfg['classes']]
        constraints = cfg.get('constraints')
        if constraints is not None:
            constraints = ConstraintSet.from_dict(constraints, classes)
        return cls(
            classes,
            base_counts,
            constraints=constraints,
            scale=cfg.get('scale', 1),
            horizon=cfg.get('horizon'),
            discount=cfg.get('discount', 1.0))


def load_instance(filename):
    return WcgInstance.from_dict(mmcv.load(filename))


def dump_instance(inst, filename):
    mmcv.dump(inst.to_dict(), filename, indent=2)


def largest_remainder(weights, total, rng=None):
    """Integer counts summing to ``total`` proportional to ``weights``.

    Remainder ties go to the lowest index unless ``rng`` is given.
    """
    weights = np.asarray(weights, dtype=np.float64)
    quota = weights * total
    counts = np.floor(quota + 1e-12).astype(np.int64)
    short = int(total - counts.sum())
    if short > 0:
        remainder = quota - counts
        if rng is None:
            order = np.lexsort((np.arange(remainder.size), -remainder))
        else:
            order = np.lexsort((rng.random(remainder.size), -remainder))
        counts[order[:short]] += 1
    return counts


def initial_states(inst):
    """Deterministic initial states following each initial distribution."""
    states = np.empty(inst.total_arms, dtype=np.int64)
    for i, cls in enumerate(inst.classes):
        counts = largest_remainder(cls.initial_distribution,
                                   int(inst.counts[i]))
        states[inst.arm_slice(i)] = np.repeat(
            np.arange(cls.state_count), counts)
    return states
