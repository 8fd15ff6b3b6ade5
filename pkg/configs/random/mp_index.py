instance = dict(
    type='RandomInstance',
    num_states=4,
    num_actions=3,
    num_classes=2,
    seed=7,
    base_counts=[4, 6],
    budget_ratio=0.5)
policy = dict(type='MPIndexPolicy')
sweep = dict(scales=[1, 10], horizons=[30], seeds=20)
metrics = ['reward', 'lp_gap']
work_dir = './work_dirs/random_mp_index'
log_level = 'INFO'
