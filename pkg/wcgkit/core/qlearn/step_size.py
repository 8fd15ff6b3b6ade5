import logging
from abc import ABCMeta, abstractmethod

from wcgkit.utils import Registry, build_from_cfg

STEP_SIZES = Registry('step_size')

logger = logging.getLogger(__name__)


class BaseStepSize(metaclass=ABCMeta):

    @abstractmethod
    def __call__(self, t):
        pass

    @abstractmethod
    def is_robbins_monro(self):
        """Whether sum eta = inf and sum eta^2 < inf for this family."""
        pass


@STEP_SIZES.register_module
class HarmonicStepSize(BaseStepSize):
    """eta_t = c / (t + t0); the default is 1 / (t + 1)."""

    def __init__(self, c=1.0, t0=1.0):
        if c <= 0 or t0 <= 0:
            raise ValueError('c and t0 must be positive')
        self.c = float(c)
        self.t0 = float(t0)

    def __call__(self, t):
        return self.c / (t + self.t0)

    def is_robbins_monro(self):
        return True


@STEP_SIZES.register_module
class PolynomialStepSize(BaseStepSize):
    """eta_t = c / (t + t0)^power."""

    def __init__(self, c=1.0, t0=1.0, power=1.0):
        if c <= 0 or t0 <= 0 or power <= 0:
            raise ValueError('c, t0 and power must be positive')
        self.c = float(c)
        self.t0 = float(t0)
        self.power = float(power)

    def __call__(self, t):
        return self.c / (t + self.t0)**self.power

    def is_robbins_monro(self):
        return 0.5 < self.power <= 1.0


@STEP_SIZES.register_module
class ConstantStepSize(BaseStepSize):

    def __init__(self, value=0.1):
        if not 0 < value <= 1:
            raise ValueError('constant step size must lie in (0, 1]')
        self.value = float(value)

    def __call__(self, t):
        return self.value

    def is_robbins_monro(self):
        return False


def build_step_size(cfg=None):
    if cfg is None:
        return HarmonicStepSize()
    if isinstance(cfg, BaseStepSize):
        return cfg
    return build_from_cfg(cfg, STEP_SIZES)


def step_size(t, schedule=None):
    if t < 0:
        raise ValueError('step index must be nonnegative, got {}'.format(t))
    return build_step_size(schedule)(t)


def warn_unless_robbins_monro(schedule):
    """Log a warning for schedules without the convergence guarantee."""
    if not schedule.is_robbins_monro():
        logger.warning(
            '%s does not satisfy sum eta = inf, sum eta^2 < inf; the learned '
            'Q-factors keep fluctuating and need not converge',
            schedule.__class__.__name__)
        return False
    return True
