import functools
import math

import numpy as np
import pytest

from wcgkit.core import (BanditClass, ConstraintSet, LocalPolicy,
                         RandomizedPolicy, WcgInstance, build_sa_index,
                         check_ergodic, dump_instance, enumerate_policies,
                         eval_constraints, initial_states, is_feasible,
                         largest_remainder, load_instance,
                         occupancy_from_state, trap_states, validate_instance)


def test_sa_index_labels_are_lexicographic(random_instance):
    inst = random_instance(num_states=3, num_actions=2, num_classes=2)
    sa_index = build_sa_index(inst)
    assert sa_index.total == 12
    assert sa_index.index(0, 0, 0) == 0
    assert sa_index.index(0, 2, 1) == 5
    assert sa_index.index(1, 0, 0) == 6
    for iota in range(sa_index.total):
        assert sa_index.index(*sa_index.label(iota)) == iota
    with pytest.raises(KeyError):
        sa_index.index(0, 3, 0)


def test_two_state_is_valid(two_state):
    report = validate_instance(two_state, check_ergodicity=True)
    assert report.is_valid, report.violations
    assert two_state.total_arms == 10
    assert two_state.budget_limit() == 5.0
    np.testing.assert_array_equal(two_state.constraints.costs(0), [0, 1])


def test_validation_reports_bad_rows():
    kernels = np.array([[[0.5, 0.4], [0.5, 0.5]], [[1.0, 0.0], [0.0, 1.0]]])
    cls = BanditClass(kernels, np.zeros((2, 2)))
    report = validate_instance(WcgInstance([cls], [1]))
    assert 'kernel-row' in report.codes()
    assert not report


def test_validation_rejects_state_dependent_budget():
    cls = BanditClass(
        np.tile(np.eye(2), (2, 1, 1)) * 0.5 + 0.25, np.zeros((2, 2)))
    constraints = ConstraintSet(
        [[np.array([[0.0, 1.0], [0.0, 2.0]])]],
        modes=['le'],
        offsets=[1.0],
        budget=True)
    report = validate_instance(WcgInstance([cls], [2], constraints))
    assert 'multi-gear order' in report.codes()


def test_trap_states_and_ergodicity(cyclic_instance):
    cls = cyclic_instance.classes[0]
    assert trap_states(cls).size == 0
    # the flip chain reaches s0 but has period 2
    assert not check_ergodic(cls, [0, 0])
    report = validate_instance(cyclic_instance, check_ergodicity=True)
    assert 'ergodicity' in report.codes()

    absorbing = BanditClass(
        np.array([np.eye(2), [[0.5, 0.5], [0.5, 0.5]]]), np.zeros((2, 2)))
    np.testing.assert_array_equal(trap_states(absorbing), [1])


def _walks(kernel, start, max_len):
    """(length, end) of every positive-probability walk from ``start``."""
    stack = [(start, 0)]
    while stack:
        s, k = stack.pop()
        if k == max_len:
            continue
        for s_next in np.flatnonzero(kernel[s] > 0):
            yield k + 1, s_next
            stack.append((s_next, k + 1))


def _ergodic_by_enumeration(cls, labels, max_T):
    kernel = cls.policy_kernel(labels)
    s0 = cls.ergodic_state
    for s in range(cls.state_count):
        if s != s0 and not any(
                end == s0 for _, end in _walks(kernel, s, max_T)):
            return False
    # closed walks up to 3 |S| long contain every simple cycle of the class
    lengths = [k for k, end in _walks(kernel, s0, 3 * cls.state_count)
               if end == s0]
    return functools.reduce(math.gcd, lengths, 0) == 1


def test_ergodicity_matches_path_enumeration():
    rng = np.random.default_rng(0)
    verdicts = []
    for _ in range(300):
        num_states = int(rng.integers(2, 4))
        mask = rng.random((2, num_states, num_states)) < 0.4
        mask[0, np.arange(num_states),
             rng.integers(0, num_states, size=num_states)] = True
        mask[1, np.arange(num_states),
             rng.integers(0, num_states, size=num_states)] = True
        kernels = mask * (rng.random(mask.shape) + 0.1)
        kernels /= kernels.sum(axis=2, keepdims=True)
        cls = BanditClass(kernels, np.zeros((num_states, 2)))
        labels = rng.integers(0, 2, size=num_states)
        max_T = int(rng.integers(1, num_states + 1))
        verdict = check_ergodic(cls, labels, max_T)
        assert verdict == _ergodic_by_enumeration(cls, labels, max_T)
        verdicts.append(verdict)
    assert any(verdicts) and not all(verdicts)


def test_largest_remainder_sums_to_total():
    counts = largest_remainder([0.5, 0.25, 0.25], 7)
    assert counts.sum() == 7
    np.testing.assert_array_equal(counts, [3, 2, 2])
    assert largest_remainder([1 / 3.0] * 3, 10).sum() == 10


def test_initial_states_follow_distribution():
    cls = BanditClass(
        np.full((2, 3, 3), 1 / 3.0),
        np.zeros((3, 2)),
        initial_distribution=[0.5, 0.3, 0.2])
    inst = WcgInstance([cls], [10])
    states = initial_states(inst)
    np.testing.assert_array_equal(np.bincount(states), [5, 3, 2])
    states = initial_states(inst.rescale(3))
    np.testing.assert_array_equal(np.bincount(states), [15, 9, 6])


def test_constraint_residuals(two_state):
    states = np.zeros(10, dtype=np.int64)
    actions = np.array([1] * 5 + [0] * 5)
    residuals = eval_constraints(two_state, states, actions)
    np.testing.assert_allclose(residuals, [0.0])
    assert is_feasible(two_state, residuals)
    actions[5] = 1
    assert not is_feasible(two_state,
                           eval_constraints(two_state, states, actions))


def test_occupancy_sums_to_one(random_instance):
    inst = random_instance(num_states=4, num_actions=3, num_classes=2)
    sa_index = build_sa_index(inst)
    rng = np.random.default_rng(0)
    states = np.concatenate([
        rng.integers(0, c.state_count, size=int(n))
        for c, n in zip(inst.classes, inst.counts)
    ])
    actions = rng.integers(0, 3, size=inst.total_arms)
    z = occupancy_from_state(inst, sa_index, states, actions)
    assert abs(z.sum() - 1.0) < 1e-12
    exact = occupancy_from_state(inst, sa_index, states, actions, exact=True)
    assert sum(exact) == 1


def test_local_policy_check(two_state):
    LocalPolicy([[0, 1]]).check(two_state)
    with pytest.raises(ValueError):
        LocalPolicy([[0, 2]]).check(two_state)
    with pytest.raises(ValueError):
        LocalPolicy([[0]]).check(two_state)
    assert LocalPolicy([[0, 1]]) == LocalPolicy([np.array([0, 1])])


def test_randomized_policy_normalization(two_state):
    sa_index = build_sa_index(two_state)
    RandomizedPolicy([0.5, 0.5, 0.2, 0.8], sa_index)
    with pytest.raises(ValueError):
        RandomizedPolicy([0.5, 0.6, 0.2, 0.8], sa_index)
    policy = RandomizedPolicy.uniform(sa_index, num_steps=3)
    assert policy.horizon == 2
    np.testing.assert_allclose(policy.at(10), [0.5] * 4)


def test_instance_json_round_trip(tmp_path, random_instance):
    inst = random_instance(num_states=3, num_actions=3, num_classes=2)
    filename = str(tmp_path / 'inst.json')
    dump_instance(inst, filename)
    loaded = load_instance(filename)
    assert loaded.num_classes == 2
    for a, b in zip(inst.classes, loaded.classes):
        np.testing.assert_allclose(a.kernels, b.kernels)
        np.testing.assert_allclose(a.rewards, b.rewards)
    np.testing.assert_array_equal(inst.base_counts, loaded.base_counts)
    assert loaded.constraints.budget == inst.constraints.budget


def test_enumerate_policies_is_lexicographic(two_state):
    labels = list(enumerate_policies(two_state.classes[0]))
    assert labels == [(0, 0), (0, 1), (1, 0), (1, 1)]
