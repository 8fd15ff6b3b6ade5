from .bandit import BanditClass, RewardLaw
from .constraints import ConstraintSet
from .instance import (WcgInstance, dump_instance, initial_states,
                       largest_remainder, load_instance)
from .occupancy import (constraint_violation, eval_constraints, is_feasible,
                        occupancy_counts, occupancy_from_state)
from .policy import LocalPolicy, RandomizedPolicy
from .sa_index import SaIndex, build_sa_index
from .validation import (ValidationReport, chain_period, check_ergodic,
                         enumerate_policies, ergodic_local_policy,
                         reaches_state, stationary_distribution,
                         trap_states, validate_instance)

__all__ = [
    'BanditClass', 'RewardLaw', 'ConstraintSet', 'WcgInstance',
    'dump_instance', 'initial_states', 'largest_remainder', 'load_instance',
    'constraint_violation', 'eval_constraints', 'is_feasible',
    'occupancy_counts', 'occupancy_from_state', 'LocalPolicy',
    'RandomizedPolicy', 'SaIndex', 'build_sa_index', 'ValidationReport',
    'chain_period', 'check_ergodic', 'enumerate_policies',
    'ergodic_local_policy', 'reaches_state', 'stationary_distribution',
    'trap_states', 'validate_instance'
]
