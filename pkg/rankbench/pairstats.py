"""
Statistics of the absolute differences over all unordered pairs of a value series.

Two implementations share one contract: `pairwise_stats_naive` enumerates every pair and serves as the oracle,
`pairwise_stats_fast` works from the sorted series in O(n log n) and is what the analyses use.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from rankbench.errors import DomainError
from rankbench.ingest import IndicatorId

__all__ = ['ValueSeries', 'PairwiseStats', 'count_pairs', 'pairwise_stats_naive', 'pairwise_stats_fast',
           'NAIVE_ORACLE_LIMIT']

_logger = logging.getLogger(__name__)

NAIVE_ORACLE_LIMIT = 5000


@dataclass(frozen=True)
class ValueSeries:
    """
    The values of one indicator in one period, one per university.

    The indicator and period are None for a series that was not extracted from a results table.
    """
    values: Tuple[float, ...]
    indicator: Optional[IndicatorId] = None
    period: Optional[str] = None

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not all(math.isfinite(v) for v in values):
            raise DomainError('a value series must only contain finite values')
        object.__setattr__(self, 'values', values)

    def __len__(self):
        return len(self.values)


SeriesLike = Union[ValueSeries, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class PairwiseStats:
    n_values: int
    n_pairs: int
    mean: float
    sd: Optional[float]
    """
    The sample standard deviation over the pairs, None when there is only one pair.
    """
    max: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n_values': self.n_values,
            'n_pairs': self.n_pairs,
            'mean': self.mean,
            'sd': self.sd,
            'max': self.max,
        }


def count_pairs(x: int) -> int:
    """
    The number of unordered pairs among x items, x(x-1)/2.
    """
    if x < 0:
        raise DomainError(f'cannot count pairs of {x} items')
    return x * (x - 1) // 2


def _as_array(s: SeriesLike) -> np.ndarray:
    if isinstance(s, ValueSeries):
        return np.asarray(s.values, dtype=float)
    ret = np.asarray(s, dtype=float).ravel()
    if not np.all(np.isfinite(ret)):
        raise DomainError('a value series must only contain finite values')
    return ret


def pairwise_stats_naive(s: SeriesLike) -> Optional[PairwiseStats]:
    """
    Compute the pairwise difference statistics by listing the absolute difference of every pair.

    Memory grows with the number of pairs, so this is meant as a reference for small series only.

    Returns:
        The statistics, or None if the series has fewer than two values.
    """
    x = _as_array(s)
    n = len(x)
    if n < 2:
        return None
    if n > NAIVE_ORACLE_LIMIT:
        _logger.warning('enumerating %d pairs of %d values, use pairwise_stats_fast for large series',
                        count_pairs(n), n)
    diffs = np.concatenate([np.abs(x[i + 1:] - x[i]) for i in range(n - 1)])
    n_pairs = len(diffs)
    return PairwiseStats(
        n_values=n,
        n_pairs=n_pairs,
        mean=float(diffs.mean()),
        sd=float(diffs.std(ddof=1)) if n_pairs > 1 else None,
        max=float(diffs.max()),
    )


def pairwise_stats_fast(s: SeriesLike) -> Optional[PairwiseStats]:
    """
    Compute the pairwise difference statistics without enumerating pairs.

    With the series sorted ascending as x(1) <= ... <= x(n):
        * the sum of all absolute differences is S1 = sum((2k - n - 1) * x(k))
        * the sum of all squared differences is S2 = n * sum(x^2) - sum(x)^2
    from which the mean and the sample variance over the pairs follow. The series is centred on its median first
    and all sums are exactly rounded, so the result does not depend on the series' offset.

    Returns:
        The statistics, or None if the series has fewer than two values.
    """
    x = np.sort(_as_array(s))
    n = len(x)
    if n < 2:
        return None
    n_pairs = count_pairs(n)

    centred = x - x[n // 2]
    weights = 2.0 * np.arange(1, n + 1) - (n + 1)
    s1 = math.fsum((weights * centred).tolist())
    total = math.fsum(centred.tolist())
    squares = math.fsum((centred * centred).tolist())
    s2 = n * squares - total * total

    max_diff = float(x[-1] - x[0])
    mean = min(max(s1 / n_pairs, 0.0), max_diff)
    sd: Optional[float]
    if n_pairs > 1:
        variance = (s2 - s1 * s1 / n_pairs) / (n_pairs - 1)
        sd = math.sqrt(max(variance, 0.0))
    else:
        sd = None
    return PairwiseStats(
        n_values=n,
        n_pairs=n_pairs,
        mean=mean,
        sd=sd,
        max=max_diff,
    )
