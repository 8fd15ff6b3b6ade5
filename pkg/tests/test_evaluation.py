import numpy as np
import pytest

from wcgkit.core import (exceedance_rate, exceedance_slope, index_ranking,
                         occupancy_deviation, q_error, ranking_agreement,
                         relative_gap)


def test_occupancy_deviation_uses_common_range():
    occupancy = np.array([[1.0, 0.0], [0.5, 0.5], [0.0, 1.0]])
    mean_path = np.array([[0.9, 0.1], [0.5, 0.5]])
    assert occupancy_deviation(occupancy, mean_path) == pytest.approx(0.1)
    assert occupancy_deviation(
        occupancy, mean_path, order=2) == pytest.approx(np.sqrt(0.02))
    assert occupancy_deviation(occupancy[:0], mean_path) == 0.0


def test_exceedance():
    assert exceedance_rate([0.1, 0.3, 0.2, 0.05], 0.15) == pytest.approx(0.5)
    assert exceedance_rate([], 0.1) == 0.0
    rates = np.exp(-0.5 * np.array([1.0, 2.0, 3.0]))
    assert exceedance_slope([1, 2, 3], rates) == pytest.approx(-0.5)
    assert np.isnan(exceedance_slope([1, 2], [0.2, 0.0]))


def test_rankings():
    nu = np.array([[np.nan, 0.3], [np.nan, -0.2], [np.nan, 0.5]])
    assert index_ranking(nu) == [(2, 1), (0, 1), (1, 1)]
    shifted = nu + 1.0
    swapped = nu[[1, 0, 2]]
    assert ranking_agreement([nu, nu], [shifted, swapped]) == 0.5
    assert ranking_agreement([], []) == 1.0


def test_gaps():
    assert relative_gap(2.0, 1.5) == pytest.approx(0.25)
    assert np.isnan(relative_gap(0.0, 1.0))
    tables = [[np.zeros((2, 2))]]
    oracle = [[np.array([[0.0, 0.3], [-0.4, 0.0]])]]
    assert q_error(tables, oracle) == pytest.approx(0.4)
