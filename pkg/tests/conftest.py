import numpy as np
import pytest

from wcgkit.core import BanditClass, ConstraintSet, WcgInstance
from wcgkit.instances import RandomInstance, TwoStateInstance


def pytest_addoption(parser):
    parser.addoption(
        '--runslow',
        action='store_true',
        default=False,
        help='run the multi-seed acceptance tests')


def pytest_configure(config):
    config.addinivalue_line('markers',
                            'slow: multi-seed acceptance test, minutes long')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def two_state():
    return TwoStateInstance(base_count=10, budget=5)


@pytest.fixture
def deterministic_two_state():
    return TwoStateInstance(base_count=10, budget=5, half_width=0.0)


@pytest.fixture
def random_instance():

    def make(seed=0, **kwargs):
        return RandomInstance(seed=seed, **kwargs)

    return make


@pytest.fixture
def cyclic_instance():
    """Arms move 0 -> 1 -> 0 deterministically whatever the action."""
    flip = np.array([[0.0, 1.0], [1.0, 0.0]])
    cls = BanditClass(
        np.array([flip, flip]),
        np.array([[1.0, 0.0], [0.0, 0.0]]),
        ergodic_state=0)
    constraints = ConstraintSet.budget_constraint([[0.0, 1.0]], 1, [2])
    return WcgInstance([cls], [2], constraints=constraints)
