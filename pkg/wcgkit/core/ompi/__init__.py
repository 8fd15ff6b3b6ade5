from .algorithm import (explore_actions, ompi_index_update, ompi_learn_step,
                        ompi_primary_action, ompi_step, ompi_stop_check)
from .state import QUANTITIES, OmpiState

__all__ = [
    'explore_actions', 'ompi_index_update', 'ompi_learn_step',
    'ompi_primary_action', 'ompi_step', 'ompi_stop_check', 'QUANTITIES',
    'OmpiState'
]
