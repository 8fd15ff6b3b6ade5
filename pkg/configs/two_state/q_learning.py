# Q-factors of the all-passive secondary policy learned from a run driven
# by random budget-feasible actions. The bad state is left with probability
# 0.2, so the step size needs c * 0.2 > 1/2 per update of an entry to reach
# the 1 / sqrt(t) rate.
instance = dict(type='TwoStateInstance', base_count=10, budget=5)
policy = dict(type='RandomExplorationPolicy')
learner = dict(
    labels=[[0, 0]],
    step_size=dict(type='HarmonicStepSize', c=10.0, t0=10.0),
    stimulate=False)
sweep = dict(scales=[1], horizons=[20000], seeds=50)
metrics = ['q_error']
work_dir = './work_dirs/two_state_q_learning'
log_level = 'INFO'
