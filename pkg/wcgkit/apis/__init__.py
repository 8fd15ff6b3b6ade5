from .env import get_root_logger, set_random_seed
from .experiment import (METRICS, MetricFrame, Scenario, build_learner,
                         mean_occupancy_path, run_convergence_study,
                         run_replication, run_scenario)

__all__ = [
    'get_root_logger', 'set_random_seed', 'METRICS', 'MetricFrame',
    'Scenario', 'build_learner', 'mean_occupancy_path',
    'run_convergence_study', 'run_replication', 'run_scenario'
]
