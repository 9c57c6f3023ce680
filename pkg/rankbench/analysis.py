from __future__ import annotations

import difflib
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import IntEnum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from rankbench.css import DEFAULT_CLASSES, CssClassLabel, CssPartition, css_partition
from rankbench.errors import DomainError, UnknownUniversityError
from rankbench.ingest import DatasetFilter, IndicatorId, IndicatorRecord, extract_indicator, filter_records
from rankbench.pairstats import PairwiseStats, ValueSeries, count_pairs, pairwise_stats_fast
from rankbench.utils import period_sort_key

__all__ = ['BenchmarkTable', 'GroupRow', 'GroupBenchmark', 'Verdict', 'ComparisonVerdict', 'StabilityRow',
           'build_benchmark_table', 'css_group_stats', 'compare_universities', 'benchmark_stability',
           'find_university', 'DEFAULT_REMARKABLE_FRACTION']

_logger = logging.getLogger(__name__)

DEFAULT_REMARKABLE_FRACTION = 0.9

CellKey = Tuple[IndicatorId, str]


@dataclass(frozen=True)
class BenchmarkTable:
    """
    Benchmark statistics for several indicators and periods of one field and counting mode.
    """
    cells: Dict[CellKey, Optional[PairwiseStats]]
    """
    One entry per (indicator, period), None where the series had fewer than two values.
    """
    field: str
    frac_counting: bool
    indicators: Tuple[IndicatorId, ...] = ()
    periods: Tuple[str, ...] = ()
    """
    Newest first.
    """

    def cell(self, indicator: IndicatorId, period: str) -> Optional[PairwiseStats]:
        return self.cells[indicator, period]


def _canonical_indicators(indicators: Iterable[IndicatorId]) -> Tuple[IndicatorId, ...]:
    wanted = set(indicators)
    return tuple(ind for ind in IndicatorId if ind in wanted)


def build_benchmark_table(records: Sequence[IndicatorRecord], periods: Iterable[str],
                          indicators: Iterable[IndicatorId], field: str, frac_counting: bool,
                          max_workers: Optional[int] = None) -> BenchmarkTable:
    """
    Compute the benchmark of every requested indicator in every requested period.

    Args:
        records: the parsed results table.
        periods: the periods to include, in any order; the table lists them newest first.
        indicators: the indicators to include; the table lists them in the canonical indicator order.
        field: the field to restrict to.
        frac_counting: True for fractional counting, False for full counting.
        max_workers: if greater than 1, cells are computed on a thread pool of that size.

    Raises:
        DomainError: no period or no indicator was requested.
    """
    period_order = tuple(sorted(set(periods), key=period_sort_key))
    indicator_order = _canonical_indicators(indicators)
    if not period_order:
        raise DomainError('at least one period is required')
    if not indicator_order:
        raise DomainError('at least one indicator is required')

    slices = {period: filter_records(records, DatasetFilter(field, period, frac_counting))
              for period in period_order}
    keys = [(ind, period) for ind in indicator_order for period in period_order]

    def compute(key: CellKey) -> Optional[PairwiseStats]:
        ind, period = key
        series = extract_indicator(slices[period], ind)
        _logger.debug('%s %s: %d values out of %d records', ind.value, period, len(series), len(slices[period]))
        return pairwise_stats_fast(series)

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(compute, keys))
    else:
        results = [compute(key) for key in keys]

    return BenchmarkTable(
        cells=dict(zip(keys, results)),
        field=field,
        frac_counting=frac_counting,
        indicators=indicator_order,
        periods=period_order,
    )


@dataclass(frozen=True)
class GroupRow:
    label: CssClassLabel
    n_values: int
    n_pairs: int
    stats: Optional[PairwiseStats]
    """
    None for classes with a single member.
    """


@dataclass(frozen=True)
class GroupBenchmark:
    """
    Benchmark statistics computed within each impact class of a series.
    """
    rows: Tuple[GroupRow, ...]
    partition: CssPartition
    overall: Optional[PairwiseStats]
    """
    The benchmark over the whole series, for reference.
    """

    @property
    def within_below_overall(self) -> bool:
        """
        Whether every class with a benchmark has a lower mean difference than the whole series.
        """
        if self.overall is None:
            return False
        return all(row.stats.mean < self.overall.mean for row in self.rows if row.stats is not None)


def css_group_stats(s: Union[ValueSeries, Sequence[float]],
                    requested_classes: int = DEFAULT_CLASSES) -> GroupBenchmark:
    """
    Partition a series into impact classes and compute the benchmark within each class.

    Raises:
        DomainError: as css_partition.
    """
    values = s.values if isinstance(s, ValueSeries) else tuple(s)
    partition = css_partition(s, requested_classes)
    rows = []
    for label in partition.labels:
        members = [values[i] for i in partition.members(label.index)]
        rows.append(GroupRow(
            label=label,
            n_values=len(members),
            n_pairs=count_pairs(len(members)),
            stats=pairwise_stats_fast(members),
        ))
    return GroupBenchmark(rows=tuple(rows), partition=partition, overall=pairwise_stats_fast(values))


class Verdict(IntEnum):
    WITHIN_EXPECTED = 0
    ABOVE_EXPECTED = 1
    REMARKABLE = 2

    @property
    def label(self) -> str:
        return ''.join(part.capitalize() for part in self.name.split('_'))

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class ComparisonVerdict:
    """
    Whether the difference between two universities on one indicator is meaningful.

    The difference is remarkable if it reaches `remarkable_fraction` of the largest difference in the benchmark
    population, otherwise it is more than expected if it exceeds the mean difference.
    """
    indicator: IndicatorId
    diff: float
    benchmark_mean: float
    benchmark_max: float
    verdict: Verdict
    remarkable_fraction: float

    @property
    def remarkable_threshold(self) -> float:
        return self.remarkable_fraction * self.benchmark_max

    @property
    def rule(self) -> str:
        """
        A statement of the rule that decided the verdict.
        """
        if self.verdict is Verdict.REMARKABLE:
            return (f'difference {self.diff:g} >= {self.remarkable_fraction:g} x MAX '
                    f'({self.remarkable_threshold:g})')
        if self.verdict is Verdict.ABOVE_EXPECTED:
            return (f'M ({self.benchmark_mean:g}) < difference {self.diff:g} < {self.remarkable_fraction:g} x MAX '
                    f'({self.remarkable_threshold:g})')
        return f'difference {self.diff:g} <= M ({self.benchmark_mean:g})'


def compare_universities(a: float, b: float, indicator: IndicatorId, bench: Optional[PairwiseStats],
                         remarkable_fraction: float = DEFAULT_REMARKABLE_FRACTION) -> ComparisonVerdict:
    """
    Judge the difference between the values of two universities against a benchmark.

    Raises:
        DomainError: the benchmark is absent or empty, the fraction is outside (0, 1], or a value is not finite.
    """
    if bench is None or bench.n_pairs < 1:
        raise DomainError(f'no benchmark for {indicator.value}, build the benchmark of at least two universities '
                          f'before comparing')
    if not 0 < remarkable_fraction <= 1:
        raise DomainError(f'the remarkable fraction must lie in (0, 1], got {remarkable_fraction!r}')
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError('compared values must be finite')

    diff = abs(a - b)
    if bench.max == 0:
        _logger.warning('every university in the %s benchmark has the same value, any difference is remarkable',
                        indicator.value)
    # the remarkable bound is checked first, so against a constant population even a zero difference reaches it
    if diff >= remarkable_fraction * bench.max:
        verdict = Verdict.REMARKABLE
    elif diff > bench.mean:
        verdict = Verdict.ABOVE_EXPECTED
    else:
        verdict = Verdict.WITHIN_EXPECTED
    return ComparisonVerdict(
        indicator=indicator,
        diff=diff,
        benchmark_mean=bench.mean,
        benchmark_max=bench.max,
        verdict=verdict,
        remarkable_fraction=remarkable_fraction,
    )


def find_university(records: Sequence[IndicatorRecord], name: str) -> IndicatorRecord:
    """
    Find a university by its exact name.

    Raises:
        UnknownUniversityError: no record has that name. The error lists up to five similar names.
    """
    for record in records:
        if record.university == name:
            return record
    names = sorted({r.university for r in records})
    suggestions = difflib.get_close_matches(name, names, n=5, cutoff=0.6)
    if not suggestions:
        folded = name.casefold()
        suggestions = [n for n in names if folded in n.casefold()][:5]
    raise UnknownUniversityError(name, suggestions)


@dataclass(frozen=True)
class StabilityRow:
    """
    The spread of one statistic of one indicator across periods.
    """
    indicator: IndicatorId
    statistic: str
    n_periods: int
    low: float
    high: float

    @property
    def range(self) -> float:
        return self.high - self.low


_STABILITY_STATISTICS = ('M', 'SD', 'MAX')


def benchmark_stability(table: BenchmarkTable) -> List[StabilityRow]:
    """
    Summarize how much the benchmarks of each indicator vary across the periods of a table.

    Periods without a benchmark are skipped, and an indicator without any benchmark has no rows.
    """
    ret = []
    for ind in table.indicators:
        cells = [c for c in (table.cell(ind, p) for p in table.periods) if c is not None]
        if not cells:
            continue
        for statistic in _STABILITY_STATISTICS:
            if statistic == 'M':
                values = [c.mean for c in cells]
            elif statistic == 'SD':
                values = [c.sd for c in cells if c.sd is not None]
            else:
                values = [c.max for c in cells]
            if not values:
                continue
            ret.append(StabilityRow(ind, statistic, len(values), min(values), max(values)))
    return ret
