# occupancy deviation of a fixed randomized policy as the system grows
instance = '../instances/two_state.json'
policy = dict(type='RandomizedActionPolicy', active=0.4)
sweep = dict(scales=[1, 5, 25, 125], horizons=[20], seeds=200)
metrics = ['reward', 'deviation_inf', 'deviation_l2', 'lp_gap']
eps = 0.05
# independent draws may exceed the budget
strict = False
work_dir = './work_dirs/two_state_convergence_randomized'
log_level = 'INFO'
