from .assemble import mp_assemble_actions
from .ds_algorithm import (MpIndexTable, downshift, ds_adaptive_greedy,
                           ds_indices, index_ratio)
from .policy_value import (PolicyValue, cost_matrix, policy_value,
                           simulate_policy_value, stationary_value)

__all__ = [
    'mp_assemble_actions', 'MpIndexTable', 'downshift', 'ds_adaptive_greedy',
    'ds_indices', 'index_ratio', 'PolicyValue', 'cost_matrix',
    'policy_value', 'simulate_policy_value', 'stationary_value'
]
