instance = dict(type='TwoStateInstance', base_count=10, budget=5)
policy = dict(type='MPIndexPolicy', tie_seed=None)
sweep = dict(scales=[1, 10, 100], horizons=[50], seeds=30)
metrics = ['reward', 'deviation_inf', 'lp_gap']
reference = dict(factor=10, replications=200)
work_dir = './work_dirs/two_state_mp_index'
log_level = 'INFO'
