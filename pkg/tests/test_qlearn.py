import logging
import os.path as osp

import numpy as np
import pytest

from wcgkit.core import (STEP_SIZES, ConstantStepSize, CoverageError,
                         EstimatedModel, EstimationHook, GoodCaseError,
                         HarmonicStepSize, LocalPolicy, NotIndexableError,
                         PolynomialStepSize, QLearnerHook, QTable, RewardSpec,
                         Simulator, StepData, TransitionCounts, apply_T,
                         build_step_size, check_good_case, collect_counts,
                         ds_adaptive_greedy, ergodic_local_policy,
                         lagrangian_bound, lagrangian_dual, lagrangian_q,
                         q_update, solve_q_fixed_point, span, step_size,
                         stimulate, taboo_linear_solve, update_estimates,
                         warn_unless_robbins_monro, whittle_bisection)
from wcgkit.apis import run_scenario
from wcgkit.policies import RandomExplorationPolicy

CONFIG_DIR = osp.join(osp.dirname(__file__), '..', 'configs')


def test_step_size_families():
    assert step_size(0) == pytest.approx(1.0)
    assert step_size(9) == pytest.approx(0.1)
    assert HarmonicStepSize(c=2.0, t0=2.0)(2) == pytest.approx(0.5)
    assert PolynomialStepSize(power=0.75).is_robbins_monro()
    assert not PolynomialStepSize(power=0.5).is_robbins_monro()
    assert not build_step_size(
        dict(type='ConstantStepSize', value=0.2)).is_robbins_monro()
    assert 'HarmonicStepSize' in STEP_SIZES
    with pytest.raises(ValueError):
        step_size(-1)
    with pytest.raises(KeyError):
        build_step_size(dict(type='LinearStepSize'))


def test_span_includes_terminal_anchor():
    assert span(np.array([1.0, 3.0])) == pytest.approx(3.0)
    assert span(np.array([-2.0, -1.0])) == pytest.approx(2.0)


@pytest.mark.parametrize('seed', range(50))
def test_fixed_point_matches_linear_solve(random_instance, seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(
        seed=seed,
        num_states=int(rng.integers(2, 6)),
        num_actions=int(rng.integers(2, 4)))
    cls = inst.classes[0]
    labels = ergodic_local_policy(cls)
    result = solve_q_fixed_point(cls, labels, cls.rewards, tol=1e-10)
    exact = taboo_linear_solve(cls, labels, cls.rewards)
    np.testing.assert_allclose(result.q, exact, atol=1e-8)
    assert result.spans[-1] < 1e-10


def test_good_case_check(two_state):
    cls = two_state.classes[0]
    check_good_case(cls, [0, 0])
    kernel = np.array(cls.kernels)
    kernel[0, 1] = [0.0, 1.0]
    with pytest.raises(GoodCaseError):
        check_good_case(cls, [0, 0], kernel)
    kernel[0, 1] = np.nan
    with pytest.raises(GoodCaseError):
        check_good_case(cls, [0, 0], kernel)


def test_q_update_with_exact_counts(two_state):
    policy = LocalPolicy([[0, 0]])
    qt = QTable.zeros(two_state, [policy], [RewardSpec.live()])
    visits = np.array([[4.0, 0.0], [0.0, 2.0]])
    successors = np.zeros((2, 2, 2))
    successors[0, 0] = [3, 1]
    successors[1, 1] = [2, 0]
    counts = TransitionCounts([visits], [successors], t=0)
    rewards = [[np.array([[4.0, 0.0], [0.0, 0.5]])]]
    updated = q_update(qt, counts, rewards)
    # eta_0 = 1 so visited entries jump to the sample targets
    np.testing.assert_allclose(updated.tables[0][0],
                               [[1.0, 0.0], [0.0, 0.25]])
    assert updated.t == 1
    assert qt.t == 0


def test_non_robbins_monro_schedule_warns(two_state, caplog):
    assert warn_unless_robbins_monro(HarmonicStepSize())
    qtable = QTable.zeros(
        two_state, [LocalPolicy([[0, 0]])], [RewardSpec.live()],
        step_size=dict(type='ConstantStepSize', value=0.2))
    assert isinstance(qtable.step_size, ConstantStepSize)
    with caplog.at_level(logging.WARNING):
        QLearnerHook(qtable)
    assert 'ConstantStepSize does not satisfy' in caplog.text


def test_step_counters_are_per_table(random_instance):
    inst = random_instance(seed=3, num_states=2, num_classes=2)
    policies = [LocalPolicy([[0, 0], [0, 0]]), LocalPolicy([[1, 1], [0, 0]])]
    qt = QTable.zeros(inst, policies, [RewardSpec.live()] * 2)
    # only class 0 is observed
    visits = [np.array([[1.0, 0.0], [0.0, 0.0]]), np.zeros((2, 2))]
    successors = [np.zeros((2, 2, 2)), np.zeros((2, 2, 2))]
    successors[0][0, 0] = [1, 0]
    counts = TransitionCounts(visits, successors, t=0)
    rewards = [[np.zeros((2, 2)), np.zeros((2, 2))]] * 2
    for _ in range(3):
        qt = q_update(qt, counts, rewards)
    assert qt.t == 3
    np.testing.assert_array_equal(qt.steps, [[3, 0], [3, 0]])

    changed = [policies[0], LocalPolicy([[1, 0], [0, 0]])]
    restarted = qt.replace(policies=changed)
    np.testing.assert_array_equal(restarted.steps, [[3, 0], [0, 0]])
    np.testing.assert_array_equal(qt.steps, [[3, 0], [3, 0]])
    assert restarted.t == 3


@pytest.mark.parametrize('seed', [1, 2])
def test_learning_converges_in_time(two_state, seed):
    inst = two_state.rescale(10)
    cls = inst.classes[0]
    policy = LocalPolicy([[0, 0]])
    qtable = QTable.zeros(
        inst, [policy], [RewardSpec.live()],
        step_size=dict(type='HarmonicStepSize', c=10.0, t0=10.0))
    oracle = [[taboo_linear_solve(cls, policy[0], cls.rewards)]]
    learner = QLearnerHook(qtable, oracle=oracle, trace_interval=2000)
    simulator = Simulator(
        inst, RandomExplorationPolicy(), seed=seed, hooks=[learner])
    simulator.run(10000)
    assert learner.q_error() < 0.05
    frame = learner.trace_frame()
    assert set(frame['t']) == set(range(2000, 10001, 2000))
    errors = frame.groupby('t')['error'].first()
    assert errors.iloc[-1] <= errors.iloc[0]


@pytest.mark.slow
def test_q_learning_config_meets_tolerance():
    frame = run_scenario(
        osp.join(CONFIG_DIR, 'two_state', 'q_learning.py'), nproc=4)
    errors = frame.values('q_error', h=1)
    assert errors.size == 50
    assert np.mean(errors < 0.05) >= 0.95


def test_processes_learn_as_separate_passes(two_state):
    inst = two_state.rescale(3)
    policies = [
        LocalPolicy([[0, 0]]),
        LocalPolicy([[1, 0]]),
        LocalPolicy([[0, 1]])
    ]
    specs = [RewardSpec.live(), RewardSpec.costs(inst), RewardSpec.unit(inst)]
    joint = QLearnerHook(QTable.zeros(inst, policies, specs))
    single = [
        QLearnerHook(QTable.zeros(inst, [p], [spec]))
        for p, spec in zip(policies, specs)
    ]
    simulator = Simulator(
        inst, RandomExplorationPolicy(), seed=4, hooks=[joint] + single)
    simulator.run(300)
    for k, hook in enumerate(single):
        np.testing.assert_array_equal(joint.qtable.tables[k][0],
                                      hook.qtable.tables[0][0])
        np.testing.assert_array_equal(joint.qtable.steps[k],
                                      hook.qtable.steps[0])
    assert joint.qtable.t == 300


def _counts(visits, successors):
    return TransitionCounts([np.array(visits, dtype=np.float64)],
                            [np.array(successors, dtype=np.float64)])


def test_update_estimates_overwrites_rows(two_state):
    est = EstimatedModel(two_state)
    successors = np.zeros((2, 2, 2))
    successors[0, 0] = [3, 1]
    counts = _counts([[4, 0], [0, 0]], successors)
    occupancy = np.array([0.4, 0.0, 0.0, 0.0])
    update_estimates(est, counts, dict(reward=[np.zeros((2, 2))]),
                     occupancy, t=0)
    np.testing.assert_allclose(est.kernels[0][0, 0], [0.75, 0.25])
    assert not est.frozen
    assert (0, 1, 0) in est.unestimated_rows()

    successors[0, 0] = [1, 1]
    update_estimates(est, _counts([[2, 0], [0, 0]], successors),
                     dict(reward=[np.zeros((2, 2))]), occupancy, t=1)
    np.testing.assert_allclose(est.kernels[0][0, 0], [0.5, 0.5])
    assert est.last_update[0] == 1


def test_update_estimates_running_average(two_state):
    est = EstimatedModel(two_state, running_average=True)
    occupancy = np.array([0.4, 0.0, 0.0, 0.0])
    successors = np.zeros((2, 2, 2))
    for row in ([3, 1], [1, 1]):
        successors[0, 0] = row
        update_estimates(est, _counts([[sum(row), 0], [0, 0]], successors),
                         dict(reward=[np.zeros((2, 2))]), occupancy, t=0)
    np.testing.assert_allclose(est.kernels[0][0, 0], [4 / 6.0, 2 / 6.0])


def test_estimates_freeze_at_coverage(deterministic_two_state):
    inst = deterministic_two_state.rescale(100)
    hook = EstimationHook()
    simulator = Simulator(inst, RandomExplorationPolicy(), seed=0,
                          hooks=[hook])
    simulator.run(100, until=lambda sim: hook.est is not None and
                  hook.est.frozen)
    est = hook.est
    assert est.frozen and est.good_case()
    assert est.stop_time == simulator.t - 1
    np.testing.assert_allclose(est.rewards['reward'][0],
                               inst.classes[0].rewards)


@pytest.mark.slow
def test_kernel_estimates_sharpen_with_scale(deterministic_two_state):
    errors = dict()
    for h in (100, 1000):
        inst = deterministic_two_state.rescale(h)
        errors[h] = []
        for seed in range(50):
            hook = EstimationHook()
            simulator = Simulator(
                inst, RandomExplorationPolicy(), seed=seed, hooks=[hook])
            simulator.run(100, until=lambda sim: hook.est is not None and
                          hook.est.frozen)
            assert hook.est.frozen
            errors[h].append(hook.est.kernel_error())
    # the bad-state rows are estimated from about 7% of the arms at T*
    assert np.mean(np.array(errors[1000]) < 0.05) >= 0.95
    assert np.median(errors[1000]) < np.median(errors[100])


def test_stimulate_jump_starts_learner(deterministic_two_state):
    inst = deterministic_two_state.rescale(100)
    cls = inst.classes[0]
    policy = LocalPolicy([[0, 0]])
    qtable = QTable.zeros(inst, [policy], [RewardSpec.live()])
    with pytest.raises(CoverageError):
        stimulate(qtable, EstimatedModel(inst))
    learner = QLearnerHook(
        qtable, oracle=[[taboo_linear_solve(cls, [0, 0], cls.rewards)]])
    hook = EstimationHook(learner=learner)
    simulator = Simulator(
        inst, RandomExplorationPolicy(), seed=2, hooks=[learner, hook])
    simulator.run(200, until=lambda sim: hook.stimulated)
    assert hook.stimulated
    assert learner.q_error() < 0.5


def test_lagrangian_methods_agree(two_state):
    cls = two_state.classes[0]
    costs = [np.tile([0.0, 1.0], (2, 1))]
    q_rvi, gain_rvi = lagrangian_q(cls, [0.2], costs, method='rvi')
    q_pi, gain_pi = lagrangian_q(
        cls, [0.2], costs, method='policy_iteration')
    assert gain_rvi == pytest.approx(gain_pi, abs=1e-8)
    np.testing.assert_allclose(q_rvi, q_pi, atol=1e-7)
    assert q_pi[cls.ergodic_state].max() == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        lagrangian_q(cls, [0.2], costs, method='newton')


def test_whittle_indices_of_two_state(two_state):
    cls = two_state.classes[0]
    assert whittle_bisection(cls, 1, [0, 1]) == pytest.approx(
        0.372727, abs=1e-5)
    assert whittle_bisection(cls, 0, [0, 1]) == pytest.approx(
        -0.366667, abs=1e-5)
    with pytest.raises(NotIndexableError):
        whittle_bisection(cls, 1, [0, 1], bracket=0.1)


@pytest.mark.parametrize('seed', range(20))
def test_whittle_matches_ds_under_pcl(random_instance, seed):
    inst = random_instance(seed=100 + seed, num_states=3, num_actions=2)
    cls = inst.classes[0]
    table = ds_adaptive_greedy(cls, [0.0, 1.0])
    if not table.pcl:
        pytest.skip('DS indices are not PCL-monotone')
    matrix = table.index_matrix()
    for s in range(cls.state_count):
        assert whittle_bisection(cls, s, [0.0, 1.0]) == pytest.approx(
            matrix[s, 1], abs=1e-6)


def test_lagrangian_bound(two_state):
    value, gamma = lagrangian_bound(two_state)
    assert gamma >= 0
    assert value <= lagrangian_dual(two_state, [0.0]) + 1e-9
    assert value <= lagrangian_dual(two_state, [gamma + 0.1]) + 1e-9


def test_collect_counts_of_a_step(two_state):
    states = np.array([0] * 6 + [1] * 4)
    actions = np.array([0] * 4 + [1] * 2 + [1] * 3 + [0])
    next_states = np.array([0, 0, 0, 1, 1, 0, 0, 0, 1, 1])
    step = StepData(7, states, actions, next_states, np.zeros(10),
                    np.zeros(4), np.zeros(1))
    counts = collect_counts(two_state, step)
    assert counts.t == 7
    np.testing.assert_array_equal(counts.visits[0], [[4, 2], [1, 3]])
    np.testing.assert_array_equal(counts.successors[0][0, 0], [3, 1])
    np.testing.assert_array_equal(counts.successors[0][1, 1], [2, 1])


def test_linear_solution_is_a_fixed_point(random_instance):
    cls = random_instance(seed=4, num_states=4, num_actions=3).classes[0]
    labels = ergodic_local_policy(cls)
    q = taboo_linear_solve(cls, labels, cls.rewards)
    np.testing.assert_allclose(
        apply_T(cls, labels, cls.rewards, cls.kernels, q), q, atol=1e-10)
