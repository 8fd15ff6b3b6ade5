instance = dict(type='TwoStateInstance', base_count=10, budget=5)
policy = dict(
    type='OALPPolicy',
    horizon=10,
    eps=0.01,
    explore=dict(type='RandomExplorationPolicy'),
    max_explore=10000,
    known_model=False)
sweep = dict(scales=[10, 100], horizons=[10], seeds=30)
metrics = ['reward', 'lp_gap', 'kernel_error', 'stop_time']
max_steps = 20000
work_dir = './work_dirs/two_state_oalp'
log_level = 'INFO'
