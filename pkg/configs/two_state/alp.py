instance = dict(type='TwoStateInstance', base_count=10, budget=5)
policy = dict(type='ALPPolicy', horizon=None, exact=False)
sweep = dict(scales=[1, 10, 100], horizons=[10], seeds=30)
metrics = ['reward', 'lp_gap', 'alpha_deviation', 'swaps', 'deviation_inf']
work_dir = './work_dirs/two_state_alp'
log_level = 'INFO'
