from .fluid import expected_occupancy, sa_transition_matrix, state_marginal
from .hooks import Hook
from .simulator import (Simulator, StepData, SystemState, Trajectory,
                        check_actions, run_episode, step_system)
from .streams import ArmStreams, policy_generator

__all__ = [
    'expected_occupancy', 'sa_transition_matrix', 'state_marginal', 'Hook',
    'Simulator', 'StepData', 'SystemState', 'Trajectory', 'check_actions',
    'run_episode', 'step_system', 'ArmStreams', 'policy_generator'
]
