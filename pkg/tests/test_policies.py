import numpy as np
import pytest

from wcgkit.core import Simulator, ds_indices
from wcgkit.policies import (POLICIES, ALPPolicy, BasePolicy,
                             LocalActionPolicy, MPIndexPolicy, OALPPolicy,
                             RandomizedActionPolicy, WhittleIndexPolicy,
                             build_policy)

FEASIBLE_POLICIES = [
    dict(type='LocalActionPolicy', labels=[[0, 1]]),
    dict(type='RandomExplorationPolicy'),
    dict(type='MPIndexPolicy'),
    dict(type='WhittleIndexPolicy'),
    dict(type='OMPIPolicy', explore_steps=20),
    dict(type='ALPPolicy', horizon=10),
]


def test_registry_lists_every_policy():
    assert set(POLICIES.module_dict) == {
        'LocalActionPolicy', 'RandomizedActionPolicy',
        'RandomExplorationPolicy', 'MPIndexPolicy', 'WhittleIndexPolicy',
        'OMPIPolicy', 'ALPPolicy', 'OALPPolicy'
    }
    policy = build_policy(dict(type='WhittleIndexPolicy', tol=1e-6))
    assert isinstance(policy, WhittleIndexPolicy)
    assert policy.tol == 1e-6
    with pytest.raises(KeyError):
        build_policy(dict(type='GreedyPolicy'))
    with pytest.raises(TypeError):
        build_policy('MPIndexPolicy')


def test_base_policy_is_abstract():
    with pytest.raises(TypeError):
        BasePolicy()


@pytest.mark.parametrize('cfg', FEASIBLE_POLICIES,
                         ids=[c['type'] for c in FEASIBLE_POLICIES])
def test_policies_respect_the_budget(two_state, cfg):
    inst = two_state.rescale(3)
    policy = build_policy(cfg)
    simulator = Simulator(inst, policy, seed=4, strict=True)
    trajectory = simulator.run(11)
    assert len(trajectory) == 11
    residuals = np.asarray(trajectory.residuals)
    assert (residuals <= 1e-9).all()


def test_local_policy_checks_labels(two_state):
    policy = LocalActionPolicy([[0, 2]])
    with pytest.raises(ValueError):
        Simulator(two_state, policy).run(1)


def test_randomized_policy_active_fraction(two_state):
    policy = RandomizedActionPolicy(active=0.3)
    simulator = Simulator(two_state.rescale(100), policy, seed=0,
                          strict=False)
    trajectory = simulator.run(20)
    np.testing.assert_allclose(policy.policy.at(0), [0.7, 0.3, 0.7, 0.3])
    assert np.mean(trajectory.active) == pytest.approx(300, rel=0.1)


def test_mp_index_policy_caches_tables(two_state):
    policy = MPIndexPolicy()
    Simulator(two_state, policy).run(2)
    tables = policy.tables
    np.testing.assert_allclose(tables[0], ds_indices(two_state)[0]
                               .index_matrix())
    Simulator(two_state, policy, seed=1).run(2)
    assert policy.tables is tables


def test_mp_and_whittle_agree_on_two_state(two_state):
    inst = two_state.rescale(5)
    runs = []
    for policy in (MPIndexPolicy(), WhittleIndexPolicy()):
        runs.append(Simulator(inst, policy, seed=7).run(30).step_rewards)
    np.testing.assert_allclose(runs[0], runs[1])


def test_alp_policy_summary(two_state):
    inst = two_state.rescale(4)
    policy = ALPPolicy(horizon=8)
    trajectory = Simulator(inst, policy, seed=0).run(9)
    summary = policy.summary()
    assert set(summary) == {'lp_bound', 'swaps', 'alpha_deviation'}
    assert summary['lp_bound'] > 0
    # the LP bounds the expected reward, a single run stays close to it
    assert trajectory.normalized_reward <= summary['lp_bound'] * 1.5
    with pytest.raises(ValueError):
        Simulator(two_state, ALPPolicy()).run(1)


def test_oalp_policy_finishes(two_state):
    inst = two_state.rescale(10)
    policy = OALPPolicy(
        horizon=4, eps=0.0, explore=dict(type='RandomExplorationPolicy'))
    simulator = Simulator(inst, policy, seed=3)
    simulator.run(1000, until=lambda sim: policy.done)
    summary = policy.summary()
    assert policy.done
    assert len(simulator.trajectory) == summary['stop_time'] + 4 + 1
    assert set(summary) == {
        'stop_time', 'realized', 'lp_bound', 'lp_gap', 'kernel_error',
        'alpha_deviation'
    }
