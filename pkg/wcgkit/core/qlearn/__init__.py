from .counts import TransitionCounts, collect_counts, pair_sums
from .estimation import (EstimatedModel, default_thresholds, stimulate,
                         update_estimates)
from .hooks import EstimationHook, QLearnerHook, channel_sums
from .lagrangian import (charged_rewards, lagrangian_bound, lagrangian_dual,
                         lagrangian_q, whittle_bisection)
from .qtable import (FixedPointResult, QTable, RewardSpec, apply_T,
                     check_good_case, q_update, solve_q_fixed_point, span,
                     taboo_linear_solve)
from .step_size import (STEP_SIZES, BaseStepSize, ConstantStepSize,
                        HarmonicStepSize, PolynomialStepSize, build_step_size,
                        step_size, warn_unless_robbins_monro)

__all__ = [
    'TransitionCounts', 'collect_counts', 'pair_sums', 'EstimatedModel',
    'default_thresholds', 'stimulate', 'update_estimates', 'EstimationHook',
    'QLearnerHook', 'channel_sums', 'charged_rewards', 'lagrangian_bound',
    'lagrangian_dual', 'lagrangian_q', 'whittle_bisection',
    'FixedPointResult', 'QTable', 'RewardSpec', 'apply_T', 'check_good_case',
    'q_update', 'solve_q_fixed_point', 'span', 'taboo_linear_solve',
    'STEP_SIZES', 'BaseStepSize', 'ConstantStepSize', 'HarmonicStepSize',
    'PolynomialStepSize', 'build_step_size', 'step_size',
    'warn_unless_robbins_monro'
]
