import numpy as np
from scipy.special import ndtr, ndtri

REWARD_LAWS = ('deterministic', 'uniform', 'truncnorm')


def _frozen(array, dtype=np.float64):
    array = np.array(array, dtype=dtype)
    array.setflags(write=False)
    return array


class RewardLaw(object):
    """Sampling law of the random reward around its mean r(s, a).

    All laws are symmetric around the mean so the sample mean of the law
    equals ``mean_rewards`` exactly.

    Args:
        type (str): One of 'deterministic', 'uniform', 'truncnorm'.
        half_width (float): Half width of the uniform interval.
        sigma (float): Scale of the normal before truncation.
        clip (float): Truncation radius of the normal around the mean.
    """

    def __init__(self, type='deterministic', half_width=0.0, sigma=1.0,
                 clip=None):
        if type not in REWARD_LAWS:
            raise ValueError('reward law must be one of {}, got {}'.format(
                REWARD_LAWS, type))
        self.type = type
        self.half_width = float(half_width)
        self.sigma = float(sigma)
        self.clip = float(clip) if clip is not None else 3.0 * self.sigma

    def __repr__(self):
        return '{}(type={})'.format(self.__class__.__name__, self.type)

    @property
    def spread(self):
        """Largest absolute deviation of a sample from its mean."""
        if self.type == 'uniform':
            return self.half_width
        if self.type == 'truncnorm':
            return self.clip
        return 0.0

    def sample(self, means, uniforms):
        """Map uniforms in [0, 1) to rewards by inversion."""
        means = np.asarray(means, dtype=np.float64)
        if self.type == 'deterministic':
            return means.copy()
        if self.type == 'uniform':
            return means + self.half_width * (2.0 * uniforms - 1.0)
        lo = ndtr(-self.clip / self.sigma)
        hi = ndtr(self.clip / self.sigma)
        z = ndtri(lo + uniforms * (hi - lo))
        return means + self.sigma * np.clip(z, -self.clip / self.sigma,
                                            self.clip / self.sigma)

    def to_dict(self):
        cfg = dict(type=self.type)
        if self.type == 'uniform':
            cfg['half_width'] = self.half_width
        elif self.type == 'truncnorm':
            cfg.update(sigma=self.sigma, clip=self.clip)
        return cfg

    @classmethod
    def from_dict(cls, cfg):
        if cfg is None:
            return cls()
        if isinstance(cfg, RewardLaw):
            return cfg
        return cls(**cfg)


class BanditClass(object):
    """A gang of stochastically identical bandit processes.

    Args:
        kernels (array): Transition kernels of shape (|A|, |S|, |S|), one
            row-stochastic matrix per action.
        rewards (array): Mean rewards r(s, a) of shape (|S|, |A|).
        reward_law (dict | :obj:`RewardLaw`, optional): Sampling law.
        ergodic_state (int): Index of the ergodic state s0.
        initial_distribution (array, optional): Initial state distribution,
            point mass on s0 by default.
        name (str, optional): Display name.
    """

    def __init__(self,
                 kernels,
                 rewards,
                 reward_law=None,
                 ergodic_state=0,
                 initial_distribution=None,
                 name=None):
        self.kernels = _frozen(kernels)
        self.rewards = _frozen(rewards)
        if self.kernels.ndim != 3 or (self.kernels.shape[1] !=
                                      self.kernels.shape[2]):
            raise ValueError(
                'kernels must have shape (A, S, S), got {}'.format(
                    self.kernels.shape))
        num_actions, num_states, _ = self.kernels.shape
        if self.rewards.shape != (num_states, num_actions):
            raise ValueError('rewards must have shape {}, got {}'.format(
                (num_states, num_actions), self.rewards.shape))
        self.reward_law = RewardLaw.from_dict(reward_law)
        self.ergodic_state = int(ergodic_state)
        if initial_distribution is None:
            initial_distribution = np.zeros(num_states)
            if 0 <= self.ergodic_state < num_states:
                initial_distribution[self.ergodic_state] = 1.0
        self.initial_distribution = _frozen(initial_distribution)
        self.name = name

    def __repr__(self):
        return '{}(name={}, states={}, actions={})'.format(
            self.__class__.__name__, self.name, self.state_count,
            self.action_count)

    @property
    def state_count(self):
        return self.kernels.shape[1]

    @property
    def action_count(self):
        return self.kernels.shape[0]

    @property
    def reward_bound(self):
        """R_max such that every reward sample satisfies |R| <= R_max."""
        return float(np.abs(self.rewards).max()) + self.reward_law.spread

    def policy_kernel(self, labels, kernels=None):
        """Transition matrix of the chain induced by a local policy."""
        kernels = self.kernels if kernels is None else kernels
        labels = np.asarray(labels, dtype=np.int64)
        return kernels[labels, np.arange(self.state_count), :]

    def policy_vector(self, labels, matrix=None):
        """Entries matrix[s, labels[s]] of an (|S|, |A|) matrix."""
        matrix = self.rewards if matrix is None else np.asarray(matrix)
        labels = np.asarray(labels, dtype=np.int64)
        return matrix[np.arange(self.state_count), labels]

    def to_dict(self):
        return dict(
            name=self.name,
            kernels=self.kernels.tolist(),
            rewards=self.rewards.tolist(),
            reward_law=self.reward_law.to_dict(),
            ergodic_state=self.ergodic_state,
            initial_distribution=self.initial_distribution.tolist())

    @classmethod
    def from_dict(cls, cfg):
        cfg = dict(cfg)
        cfg.pop('base_count', None)
        return cls(**cfg)
