# kernel estimates at the end of the stimulate process; at h = 100 the
# bad-state rows are estimated from about 70 arms
instance = dict(type='TwoStateInstance', base_count=10, budget=5)
policy = dict(type='RandomExplorationPolicy')
learner = dict(labels=[[0, 0]], stimulate=True)
sweep = dict(scales=[100, 1000], horizons=[200], seeds=50)
metrics = ['kernel_error', 'stop_time', 'q_error']
work_dir = './work_dirs/two_state_stimulate'
log_level = 'INFO'
