import os.path as osp

import numpy as np
import pandas as pd
import pytest

from wcgkit.apis import (MetricFrame, Scenario, build_learner, get_root_logger,
                         mean_occupancy_path, run_convergence_study,
                         run_replication, run_scenario, set_random_seed)
from wcgkit.core import (ScenarioError, build_lp, initial_marginal,
                         initial_states, solve_lp)

CONFIG_DIR = osp.join(osp.dirname(__file__), '..', 'configs')

SCENARIO = """\
instance = dict(type='TwoStateInstance', base_count=10, budget=5)
policy = dict(type='MPIndexPolicy')
sweep = dict(scales=[1, 2], horizons=[5], seeds={seeds})
metrics = ['reward', 'lp_gap']
"""


def _write(tmp_path, text, name='scenario.py'):
    filename = tmp_path / name
    filename.write_text(text)
    return str(filename)


def _small(**kwargs):
    cfg = dict(
        instance=dict(type='TwoStateInstance', base_count=10, budget=5),
        policy=dict(type='MPIndexPolicy'),
        sweep=dict(scales=[1, 2], horizons=[5], seeds=[0, 1]),
        metrics=['reward', 'lp_gap', 'deviation_inf'],
        reference=dict(factor=1, replications=3))
    cfg.update(kwargs)
    return Scenario.from_dict(cfg, name='small')


def test_scenario_from_file(tmp_path):
    filename = _write(tmp_path, SCENARIO.format(seeds=3))
    scenario = Scenario.fromfile(filename)
    assert scenario.name == 'scenario'
    assert scenario.seeds == [0, 1, 2]
    assert scenario.scales == [1, 2]
    assert scenario.strict
    assert len(scenario.hash) == 12
    # the hash follows the file bytes
    other = Scenario.fromfile(_write(tmp_path, SCENARIO.format(seeds=4),
                                     'other.py'))
    assert other.hash != scenario.hash


def test_empty_grid_reports_file_and_line(tmp_path):
    filename = _write(tmp_path, SCENARIO.format(seeds=[]))
    with pytest.raises(ScenarioError) as err:
        Scenario.fromfile(filename)
    assert '{}:3: sweep: grid "seeds" is empty'.format(
        filename) in err.value.diagnostics


def test_every_problem_is_reported(tmp_path):
    text = SCENARIO.format(seeds=2).replace('MPIndexPolicy', 'NoPolicy')
    text = text.replace("'lp_gap'", "'regret'")
    text = text.replace('budget=5', 'budget=5, discount=2.0')
    with pytest.raises(ScenarioError) as err:
        Scenario.fromfile(_write(tmp_path, text))
    lines = err.value.diagnostics
    assert any(':2: policy: unknown policy type' in line for line in lines)
    assert any(':4: metrics: unknown metrics' in line for line in lines)
    assert any(':1: instance: [' in line for line in lines)


def test_missing_and_broken_files(tmp_path):
    with pytest.raises(ScenarioError) as err:
        Scenario.fromfile(str(tmp_path / 'absent.py'))
    assert err.value.diagnostics[0].endswith(':0: file not found')
    filename = _write(tmp_path, 'policy = dict(\n')
    with pytest.raises(ScenarioError) as err:
        Scenario.fromfile(filename)
    assert err.value.diagnostics[0].startswith(filename + ':')
    with pytest.raises(ScenarioError) as err:
        Scenario.from_dict(dict(policy=dict(type='MPIndexPolicy')))
    assert len(err.value.diagnostics) == 2


def test_runs_are_deterministic():
    first = run_scenario(_small())
    second = run_scenario(_small())
    pd.testing.assert_frame_equal(first.frame, second.frame)
    assert len(first) == 2 * 2 * 3
    assert set(first.frame['metric']) == {'reward', 'lp_gap',
                                          'deviation_inf'}
    assert (first.frame['t'] == 6).all()


def test_seeds_override_the_grid():
    frame = run_scenario(_small(metrics=['reward']), seeds=[5])
    assert list(frame.frame['seed']) == [5, 5]


def test_replication_with_learner():
    scenario = _small(
        metrics=['reward', 'q_error', 'kernel_error'],
        learner=dict(step_size=dict(type='HarmonicStepSize')))
    records = run_replication(scenario, 2, 5, seed=0)
    metrics = [r['metric'] for r in records]
    assert metrics == ['reward', 'q_error', 'kernel_error']
    assert all(r['T'] == 5 and r['h'] == 2 for r in records)


def test_learner_defaults_to_ergodic_labels(two_state):
    learner = build_learner(two_state)
    assert learner.qtable.policies[0][0].tolist() in ([0, 0], [0, 1],
                                                      [1, 0], [1, 1])
    with pytest.raises(ValueError):
        build_learner(two_state, dict(labels=[[0, 5]]))


def test_mean_path_of_randomized_policy():
    scenario = _small(policy=dict(type='RandomizedActionPolicy', active=0.2),
                      strict=False)
    path = mean_occupancy_path(scenario, 1, 5)
    assert path.shape == (6, 4)
    np.testing.assert_allclose(path.sum(axis=1), 1.0)
    np.testing.assert_allclose(path[0], [0.8, 0.2, 0.0, 0.0])


def test_metric_frame_aggregates(tmp_path):
    records = [
        dict(scenario='s', scenario_hash='x', version='0', h=h, T=5, seed=k,
             t=6, metric='reward', value=float(k))
        for h in (1, 2) for k in range(11)
    ]
    records.append(
        dict(scenario='s', scenario_hash='x', version='0', h=1, T=5, seed=0,
             t=6, metric='kernel_error', value=np.nan))
    frame = MetricFrame(records)
    rows = frame.aggregate()
    assert [(r['h'], r['metric']) for r in rows] == [(1, 'kernel_error'),
                                                     (1, 'reward'),
                                                     (2, 'reward')]
    assert rows[0]['count'] == 0
    assert rows[1]['median'] == pytest.approx(5.0)
    assert rows[1]['q10'] == pytest.approx(1.0)
    assert rows[1]['q90'] == pytest.approx(9.0)
    csv_file, json_file = frame.dump(str(tmp_path))
    restored = MetricFrame.from_csv(csv_file)
    np.testing.assert_allclose(restored.values('reward', h=2), np.arange(11))


def test_exceedance_shrinks_with_scale(two_state):
    rates, slope = run_convergence_study(
        two_state,
        dict(type='RandomizedActionPolicy', active=0.2),
        scales=[1, 5, 25, 125],
        eps=0.05,
        seeds=200,
        horizon=20)
    assert list(rates.columns) == [
        'h', 'exceedance', 'mean_deviation', 'max_deviation'
    ]
    exceedance = rates['exceedance'].to_numpy()
    assert (np.diff(exceedance) <= 0).all()
    assert exceedance[-1] < 0.05
    assert (np.diff(rates['mean_deviation'].to_numpy()) < 0).all()
    assert slope < 0
    with pytest.raises(ValueError):
        run_convergence_study(two_state, dict(type='MPIndexPolicy'), [1],
                              0.1, 2, None)


def test_set_random_seed_returns_a_seed_sequence():
    first = set_random_seed(3)
    draw = np.random.rand()
    second = set_random_seed(3)
    assert np.random.rand() == draw
    assert first.entropy == second.entropy == 3


def test_root_logger_writes_a_log_file(tmp_path):
    log_file = str(tmp_path / 'wcg.log')
    logger = get_root_logger(log_file=log_file)
    get_root_logger(log_file=log_file)
    logger.info('hello from the harness')
    handlers = [h for h in logger.handlers
                if getattr(h, 'baseFilename', None) == log_file]
    assert len(handlers) == 1
    handlers[0].flush()
    assert 'hello from the harness' in open(log_file).read()
    logger.removeHandler(handlers[0])
    handlers[0].close()


@pytest.mark.parametrize('policy', [
    dict(type='MPIndexPolicy'),
    dict(type='ALPPolicy'),
    dict(type='RandomExplorationPolicy')
])
def test_realized_reward_stays_below_lp_bound(policy):
    scenario = Scenario.from_dict(
        dict(
            instance=dict(type='TwoStateInstance', base_count=10, budget=5),
            policy=policy,
            sweep=dict(scales=[10], horizons=[10], seeds=30),
            metrics=['reward']),
        name='bound')
    rewards = run_scenario(scenario).values('reward', h=10)
    inst = scenario.build_instance(10, 10)
    x0 = initial_marginal(inst, states=initial_states(inst))
    bound = solve_lp(build_lp(inst, x0, 10, initial='state')).check()
    se = rewards.std(ddof=1) / np.sqrt(rewards.size)
    assert rewards.size == 30
    assert rewards.mean() <= bound.objective + 3 * se


def test_alp_gap_shrinks_with_scale():
    frame = run_scenario(osp.join(CONFIG_DIR, 'two_state', 'alp.py'))
    medians = [np.median(frame.values('lp_gap', h=h)) for h in (1, 10, 100)]
    assert medians[0] >= medians[1] >= medians[2]


@pytest.mark.slow
def test_oalp_gap_shrinks_with_scale():
    frame = run_scenario(
        osp.join(CONFIG_DIR, 'two_state', 'oalp.py'), nproc=4)
    assert np.median(frame.values('lp_gap', h=100)) <= np.median(
        frame.values('lp_gap', h=10))


@pytest.mark.slow
def test_ompi_ranking_matches_offline_indices():
    frame = run_scenario(
        osp.join(CONFIG_DIR, 'two_state', 'ompi.py'), nproc=4)
    agreement = frame.values('ranking_agreement', h=100)
    assert agreement.size == 20
    assert np.mean(agreement == 1.0) >= 0.9
