from .builder import build_instance
from .random_instance import RandomInstance
from .registry import INSTANCES
from .two_state import TwoStateInstance

__all__ = ['INSTANCES', 'build_instance', 'RandomInstance', 'TwoStateInstance']
