import numpy as np


def occupancy_deviation(occupancy, mean_path, order=np.inf):
    """max_t ||Z(t) - z(t)|| over the common time range."""
    occupancy = np.asarray(occupancy, dtype=np.float64)
    mean_path = np.asarray(mean_path, dtype=np.float64)
    steps = min(occupancy.shape[0], mean_path.shape[0])
    if steps == 0:
        return 0.0
    diff = occupancy[:steps] - mean_path[:steps]
    return float(np.linalg.norm(diff, ord=order, axis=1).max())


def exceedance_rate(deviations, eps):
    """Fraction of replications whose deviation exceeds ``eps``."""
    deviations = np.asarray(deviations, dtype=np.float64)
    if deviations.size == 0:
        return 0.0
    return float((deviations > eps).mean())


def exceedance_slope(scales, rates, floor=None):
    """Slope of log exceedance rate against h by least squares.

    Zero rates are floored at half a replication so the logarithm stays
    finite; NaN when fewer than two scales remain.
    """
    scales = np.asarray(scales, dtype=np.float64)
    rates = np.asarray(rates, dtype=np.float64)
    if floor is not None:
        rates = np.maximum(rates, floor)
    keep = rates > 0
    if keep.sum() < 2:
        return float('nan')
    slope, _ = np.polyfit(scales[keep], np.log(rates[keep]), 1)
    return float(slope)


def relative_gap(bound, realized):
    bound = float(bound)
    if bound == 0:
        return float('nan')
    return (bound - float(realized)) / bound


def q_error(tables, oracle):
    """Sup distance between estimated and exact Q-factor tables."""
    return float(
        max(
            np.abs(np.asarray(q) - np.asarray(q_star)).max()
            for per_class, per_oracle in zip(tables, oracle)
            for q, q_star in zip(per_class, per_oracle)))


def index_ranking(matrix):
    """(s, a) pairs of the finite entries by decreasing index."""
    matrix = np.asarray(matrix, dtype=np.float64)
    pairs = list(zip(*np.nonzero(np.isfinite(matrix))))
    values = np.array([matrix[p] for p in pairs])
    order = np.argsort(-values, kind='stable')
    return [(int(pairs[k][0]), int(pairs[k][1])) for k in order]


def ranking_agreement(estimated, reference):
    """Fraction of classes whose index rankings coincide."""
    if not estimated:
        return 1.0
    same = [
        index_ranking(e) == index_ranking(r)
        for e, r in zip(estimated, reference)
    ]
    return float(np.mean(same))
