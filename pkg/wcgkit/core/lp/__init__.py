from .alp import alp_actions, repair_counts, round_alpha
from .oalp import OalpController, oalp_run
from .occupancy_lp import (ConversionMaps, build_lp, check_initial,
                           initial_marginal, policy_from_x)
from .problem import LpProblem, LpSolution
from .robust_lp import (EpsLpProblem, build_eps_lp, lifted_relaxation,
                        relaxed_kernels, solve_eps_lp, solve_eps_path)
from .simplex import solve_lp

__all__ = [
    'alp_actions', 'repair_counts', 'round_alpha', 'OalpController',
    'oalp_run', 'ConversionMaps', 'build_lp', 'check_initial',
    'initial_marginal', 'policy_from_x', 'LpProblem', 'LpSolution',
    'EpsLpProblem', 'build_eps_lp', 'lifted_relaxation', 'relaxed_kernels',
    'solve_eps_lp', 'solve_eps_path', 'solve_lp'
]
