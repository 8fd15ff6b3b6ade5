from .base import BasePolicy
from .builder import build_policy
from .index_policies import MPIndexPolicy, OMPIPolicy, WhittleIndexPolicy
from .lp_policies import ALPPolicy, OALPPolicy
from .registry import POLICIES
from .simple import (LocalActionPolicy, RandomExplorationPolicy,
                     RandomizedActionPolicy)

__all__ = [
    'BasePolicy', 'build_policy', 'MPIndexPolicy', 'OMPIPolicy',
    'WhittleIndexPolicy', 'ALPPolicy', 'OALPPolicy', 'POLICIES',
    'LocalActionPolicy', 'RandomExplorationPolicy', 'RandomizedActionPolicy'
]
