from .metrics import (exceedance_rate, exceedance_slope, index_ranking,
                      occupancy_deviation, q_error, ranking_agreement,
                      relative_gap)
from .summary import (print_index_summary, print_lp_summary,
                      print_sweep_summary, print_validation_report)

__all__ = [
    'exceedance_rate', 'exceedance_slope', 'index_ranking',
    'occupancy_deviation', 'q_error', 'ranking_agreement', 'relative_gap',
    'print_index_summary', 'print_lp_summary', 'print_sweep_summary',
    'print_validation_report'
]
