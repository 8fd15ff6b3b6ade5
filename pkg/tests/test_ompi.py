import numpy as np
import pytest

from wcgkit.core import (OmpiState, Simulator, ds_indices, eval_constraints,
                         explore_actions, is_feasible, mp_assemble_actions,
                         ompi_index_update, ompi_learn_step,
                         ompi_primary_action,
                         ompi_stop_check)
from wcgkit.instances import RandomInstance, TwoStateInstance
from wcgkit.policies import OMPIPolicy, RandomExplorationPolicy


def _downshift_with_exact_tables(state):
    order = []
    while not state.stopped:
        state.qtable = state.qtable.replace(tables=state.exact_tables())
        ompi_index_update(state)
        before = [labels.copy() for labels in state.labels]
        state.max_delta = 0.0
        ompi_stop_check(state)
        order.append([
            int(np.flatnonzero(b != a)[0]) if (b != a).any() else None
            for b, a in zip(before, state.labels)
        ])
    return order


def test_exact_tables_reproduce_ds(two_state):
    state = OmpiState(two_state)
    assert state.num_positions == 2
    assert len(state.qtable) == 6 * 2
    order = _downshift_with_exact_tables(state)
    assert order == [[1], [0]]
    np.testing.assert_allclose(state.nu_hat[0],
                               ds_indices(two_state)[0].index_matrix(),
                               atol=1e-10)
    assert state.exploration_probability() == 0.0


def test_exact_tables_reproduce_ds_on_random_gangs():
    inst = RandomInstance(seed=11, num_states=3, num_actions=3,
                          num_classes=2)
    state = OmpiState(inst)
    _downshift_with_exact_tables(state)
    for nu, table in zip(state.nu_hat, ds_indices(inst)):
        np.testing.assert_allclose(nu, table.index_matrix(), atol=1e-9)


def test_full_p_bar_uses_mp_indices(two_state):
    inst = two_state.rescale(5)
    state = OmpiState(inst)
    state.nu_hat = [ds_indices(inst)[0].index_matrix()]
    states = np.random.default_rng(0).integers(0, 2, size=inst.total_arms)
    actions = ompi_primary_action(
        state, states, np.random.default_rng(3), p_bar=1.0)
    expected = mp_assemble_actions(inst, state.index_matrices(), states,
                                   np.random.default_rng(3))
    np.testing.assert_array_equal(actions, expected)


def test_exploration_schedule(two_state):
    state = OmpiState(two_state, explore_steps=100, min_explore=0.1)
    assert state.exploration_probability() == pytest.approx(1.0)
    state.t = 50
    assert state.exploration_probability() == pytest.approx(0.5)
    state.t = 500
    assert state.exploration_probability() == pytest.approx(0.1)


def test_ompi_requires_budget():
    from wcgkit.core import WcgInstance
    inst = WcgInstance(TwoStateInstance().classes, [10])
    with pytest.raises(ValueError):
        OmpiState(inst)


@pytest.mark.parametrize('seed', range(5))
def test_explore_actions_are_feasible(seed):
    inst = RandomInstance(
        seed=seed, num_states=3, num_actions=3, num_classes=2,
        budget_ratio=0.4).rescale(3)
    rng = np.random.default_rng(seed)
    states = np.zeros(inst.total_arms, dtype=np.int64)
    for _ in range(10):
        actions = explore_actions(inst, rng)
        assert is_feasible(inst, eval_constraints(inst, states, actions))


def test_ompi_policy_runs_and_traces(two_state):
    inst = two_state.rescale(10)
    policy = OMPIPolicy(
        explore_steps=50, stimulate=True, trace_interval=10, epsilon=1e-2)
    simulator = Simulator(inst, policy, seed=0)
    trajectory = simulator.run(200)
    assert len(trajectory) == 200
    assert policy.state.est.frozen
    frame = policy.state.trace_frame()
    assert list(frame.columns) == ['t', 'i', 's', 'a', 'nu', 'm']
    assert set(frame['t']) <= set(range(10, 201, 10))
    summary = policy.summary()
    assert set(summary) == {'stopped', 'positions'}


def test_learn_step_advances_every_table(two_state):
    inst = two_state.rescale(5)
    state = OmpiState(inst)
    simulator = Simulator(inst, RandomExplorationPolicy(), seed=1)
    simulator.run(0)
    ompi_learn_step(state, simulator.step())
    assert state.t == 1
    assert state.qtable.t == 1
    assert np.isfinite(state.max_delta) and state.max_delta >= 0


def test_downshift_restarts_changed_tables(two_state):
    inst = two_state.rescale(5)
    state = OmpiState(inst)
    simulator = Simulator(inst, RandomExplorationPolicy(), seed=1)
    simulator.run(0)
    for _ in range(3):
        ompi_learn_step(state, simulator.step())
    np.testing.assert_array_equal(state.qtable.steps, 3)
    state.nu_hat[0][:, 1] = [0.0, 1.0]
    state.max_delta = 0.0
    ompi_stop_check(state)
    np.testing.assert_array_equal(state.labels[0], [1, 0])
    # only the downshift at position 1 keeps its secondary policy
    for k, (_, j, sigma) in enumerate(state.tags):
        expected = 3 if (j, sigma) == (1, 1) else 0
        assert state.qtable.steps[k, 0] == expected
    assert state.qtable.t == 3
