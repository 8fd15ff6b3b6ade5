instance = dict(type='TwoStateInstance', base_count=10, budget=5)
policy = dict(
    type='OMPIPolicy',
    epsilon=1e-3,
    explore_steps=2000,
    min_explore=0.05,
    step_size=dict(type='HarmonicStepSize', c=1.0, t0=1.0),
    stimulate=True,
    restimulate=False)
sweep = dict(scales=[100], horizons=[5000], seeds=20)
metrics = ['reward', 'ranking_agreement']
work_dir = './work_dirs/two_state_ompi'
log_level = 'INFO'
