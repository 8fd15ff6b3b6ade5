instance = dict(type='TwoStateInstance', base_count=10, budget=5)
policy = dict(type='WhittleIndexPolicy', tol=1e-9)
sweep = dict(scales=[1, 10, 100], horizons=[50], seeds=30)
metrics = ['reward', 'lp_gap']
work_dir = './work_dirs/two_state_whittle'
log_level = 'INFO'
