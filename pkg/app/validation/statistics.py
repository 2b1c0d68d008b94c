import numpy as np

from scipy.stats import chi2_contingency, chisquare, poisson
from typing import Sequence, Tuple

from app.validation.cme import DistributionVector, TruncatedStateSpace


METRIC_TV = 'tv'
METRIC_CHI2 = 'chi2_pvalue'

MIN_EXPECTED = 5.0


def sample_histogram(space: TruncatedStateSpace, samples: Sequence[Sequence[float]]) -> Tuple[np.ndarray, int]:
    """
    Counts of the samples per enumerated state, and the number of samples outside the box.
    """
    counts = np.zeros(space.size)
    outside = 0
    for x in samples:
        if space.contains(x):
            counts[space.index(x)] += 1
        else:
            outside += 1

    return counts, outside


def _pool(observed: np.ndarray, expected: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Merge every bin whose expected count is below `MIN_EXPECTED` into one tail bin.
    """
    small = expected < MIN_EXPECTED
    if not small.any():
        return observed, expected

    pooled_observed = np.append(observed[~small], observed[small].sum())
    pooled_expected = np.append(expected[~small], expected[small].sum())
    if pooled_expected[-1] == 0:
        pooled_observed, pooled_expected = pooled_observed[:-1], pooled_expected[:-1]

    return pooled_observed, pooled_expected


def distribution_distance(
    counts: Sequence[float],
    exact: DistributionVector,
    metric: str = METRIC_TV,
    outside: int = 0,
) -> float:
    """
    Compare a sample histogram with an exact distribution on the same enumeration.

    `tv` returns the total variation distance; samples outside the box count as mass the exact
    distribution does not have. `chi2_pvalue` returns the goodness-of-fit p-value.
    """
    counts = np.asarray(counts, dtype=float)
    total = counts.sum() + outside
    if total == 0:
        raise ValueError('Cannot compare an empty sample.')

    if counts.shape != exact.probabilities.shape:
        raise ValueError('Histogram and distribution use different enumerations.')

    if metric == METRIC_TV:
        return 0.5 * (float(np.abs(counts / total - exact.probabilities).sum()) + outside / total)

    if metric == METRIC_CHI2:
        expected = exact.probabilities * total
        observed = np.append(counts, outside)
        expected = np.append(expected, 0.0)
        observed, expected = _pool(observed, expected)
        expected *= observed.sum() / expected.sum()
        return float(chisquare(observed, expected).pvalue)

    raise ValueError(f'Metric {metric} is not supported.')


def two_sample_chi2(samples_a: Sequence, samples_b: Sequence) -> float:
    """
    p-value of the χ² homogeneity test between two samples of states, pooling sparse values.
    """
    a = [tuple(x) for x in samples_a]
    b = [tuple(x) for x in samples_b]
    if not a or not b:
        raise ValueError('Cannot compare an empty sample.')

    values = sorted(set(a) | set(b))
    position = {value: i for i, value in enumerate(values)}
    table = np.zeros((2, len(values)))
    for x in a:
        table[0, position[x]] += 1
    for x in b:
        table[1, position[x]] += 1

    keep = table.sum(axis=0) >= 2 * MIN_EXPECTED
    pooled = table[:, ~keep].sum(axis=1, keepdims=True)
    table = np.hstack([table[:, keep], pooled]) if (~keep).any() else table
    table = table[:, table.sum(axis=0) > 0]

    if table.shape[1] < 2:
        return 1.0

    return float(chi2_contingency(table, correction=False).pvalue)


def poisson_distance(distribution: Sequence[float], mean: float) -> float:
    """
    Total variation distance between a distribution on `0, 1, ...` and Poisson(`mean`).
    """
    p = np.asarray(distribution, dtype=float)
    reference = poisson.pmf(np.arange(len(p)), mean)
    return 0.5 * (float(np.abs(p - reference).sum()) + float(poisson.sf(len(p) - 1, mean)))
