import numpy as np

CONSTRAINT_MODES = ('eq', 'le')


class ConstraintSet(object):
    """Linear coupling constraints sum_{i,n} f_{i,l}(s, a) - h * b_l (= | <=) 0.

    Args:
        functions (list[list[array]]): ``functions[l][i]`` is the
            (|S_i|, |A_i|) matrix of f_{i,l}.
        modes (list[str], optional): 'eq' or 'le' per constraint, 'eq'
            by default.
        offsets (list[float], optional): Per unit-scale offsets b_l,
            multiplied by the scale h when residuals are evaluated.
        budget (bool): Marks a single constraint whose cost depends on the
            action label only and increases strictly with it.
    """

    def __init__(self, functions, modes=None, offsets=None, budget=False):
        self.functions = tuple(
            tuple(self._freeze(f) for f in per_class)
            for per_class in functions)
        count = len(self.functions)
        self.modes = tuple(modes) if modes is not None else ('eq', ) * count
        if offsets is None:
            offsets = np.zeros(count)
        self.offsets = self._freeze(offsets).reshape(-1)
        self.budget = bool(budget)
        if len(self.modes) != count or self.offsets.size != count:
            raise ValueError(
                'modes and offsets must have one entry per constraint')
        for mode in self.modes:
            if mode not in CONSTRAINT_MODES:
                raise ValueError('constraint mode must be one of {}, '
                                 'got {}'.format(CONSTRAINT_MODES, mode))

    @staticmethod
    def _freeze(array):
        array = np.array(array, dtype=np.float64)
        array.setflags(write=False)
        return array

    def __repr__(self):
        return '{}(count={}, modes={}, budget={})'.format(
            self.__class__.__name__, self.count, self.modes, self.budget)

    @property
    def count(self):
        return len(self.functions)

    def function(self, ell, i):
        return self.functions[ell][i]

    def costs(self, i):
        """Action costs f_i(a) of class i under the budget form."""
        if not self.budget:
            raise ValueError('costs are only defined for a budget constraint')
        return np.asarray(self.functions[0][i][0])

    def limit(self, scale):
        """Right hand side h * b of the budget inequality."""
        return float(scale) * float(self.offsets[0])

    @classmethod
    def budget_constraint(cls, costs, limit, state_counts):
        """Budget form: sum of action costs at most ``limit`` per unit.

        Args:
            costs (list[array]): Per class cost vector over action labels.
            limit (float): Budget per unit of scale.
            state_counts (list[int]): |S_i| per class.
        """
        functions = [[
            np.tile(np.asarray(c, dtype=np.float64), (num_states, 1))
            for c, num_states in zip(costs, state_counts)
        ]]
        return cls(functions, modes=['le'], offsets=[limit], budget=True)

    @classmethod
    def empty(cls, classes):
        """A single always-satisfied constraint f = 0."""
        functions = [[
            np.zeros((c.state_count, c.action_count)) for c in classes
        ]]
        return cls(functions, modes=['eq'], offsets=[0.0])

    def to_dict(self):
        return dict(
            functions=[[f.tolist() for f in per_class]
                       for per_class in self.functions],
            modes=list(self.modes),
            offsets=self.offsets.tolist(),
            budget=self.budget)

    @classmethod
    def from_dict(cls, cfg, classes):
        cfg = dict(cfg)
        if 'costs' in cfg:
            return cls.budget_constraint(
                cfg['costs'], cfg.get('limit', 0.0),
                [c.state_count for c in classes])
        return cls(**cfg)
