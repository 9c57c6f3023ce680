"""
Text renderings of benchmark results as markdown, csv or json.

Display rounding never touches the computed values; json always carries them at full precision.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from tabulate import tabulate

from rankbench.analysis import BenchmarkTable, ComparisonVerdict, GroupBenchmark, StabilityRow
from rankbench.css import CssPartition
from rankbench.ingest import IndicatorId
from rankbench.pairstats import PairwiseStats
from rankbench.utils import format_fixed

__all__ = ['RenderSpec', 'FORMATS', 'render_benchmark_table', 'render_group_benchmark', 'render_partition',
           'render_verdict', 'render_stability']

FORMATS = ('markdown', 'csv', 'json')


@dataclass(frozen=True)
class RenderSpec:
    format: str = 'markdown'
    precision: int = 2
    """
    Decimal places for markdown and csv. Ignored by json.
    """
    include_counts: bool = False
    """
    Whether to emit the number of values and pairs behind each statistic.
    """

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f'unknown format {self.format!r}, expected one of: ' + ', '.join(FORMATS))
        if self.precision < 0:
            raise ValueError('precision must not be negative')

    def number(self, value: Optional[float]) -> str:
        return format_fixed(value, self.precision)


def _markdown(rows: Sequence[Sequence[str]], headers: Sequence[str]) -> str:
    return tabulate(rows, headers=headers, tablefmt='pipe', disable_numparse=True) + '\n'


def _csv(rows: Sequence[Sequence[Any]], headers: Sequence[str]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(headers)
    writer.writerows(rows)
    return out.getvalue()


def _json(document: Any) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + '\n'


def _stats_dict(stats: Optional[PairwiseStats]) -> Optional[Dict[str, Any]]:
    return None if stats is None else stats.to_dict()


_STAT_ROWS = (('M', 'mean'), ('SD', 'sd'), ('MAX', 'max'))
_COUNT_ROWS = (('N', 'n_values'), ('pairs', 'n_pairs'))


def _column_indicators(t: BenchmarkTable) -> List[IndicatorId]:
    return [ind for ind in IndicatorId if ind in t.indicators]


def render_benchmark_table(t: BenchmarkTable, r: RenderSpec) -> str:
    """
    Render a benchmark table: one block per period, newest first, with the rows M, SD and MAX (and N and pairs when
    counts are included) and one column per indicator.
    """
    indicators = _column_indicators(t)
    if r.format == 'json':
        return _json({
            'field': t.field,
            'frac_counting': t.frac_counting,
            'indicators': [ind.value for ind in indicators],
            'periods': [
                {'period': period, 'cells': {ind.value: _stats_dict(t.cell(ind, period)) for ind in indicators}}
                for period in t.periods
            ],
        })

    stat_rows = _STAT_ROWS + (_COUNT_ROWS if r.include_counts else ())

    def cell_text(stats: Optional[PairwiseStats], attr: str) -> str:
        if stats is None:
            return ''
        value = getattr(stats, attr)
        if attr in ('n_values', 'n_pairs'):
            return str(value)
        return r.number(value)

    if r.format == 'csv':
        rows: List[List[str]] = []
        for period in t.periods:
            for name, attr in stat_rows:
                rows.append([period, name, *(cell_text(t.cell(ind, period), attr) for ind in indicators)])
        return _csv(rows, ['period', 'stats', *(ind.value for ind in indicators)])

    rows = []
    for period in t.periods:
        rows.append([period, *([''] * len(indicators))])
        for name, attr in stat_rows:
            rows.append([name, *(cell_text(t.cell(ind, period), attr) for ind in indicators)])
    return _markdown(rows, ['stats', *(ind.label for ind in indicators)])


def render_group_benchmark(g: GroupBenchmark, r: RenderSpec) -> str:
    """
    Render within-class benchmarks, one row per generated class.
    """
    if r.format == 'json':
        return _json({
            'thresholds': list(g.partition.thresholds),
            'requested_classes': g.partition.requested_classes,
            'generated_classes': g.partition.generated_classes,
            'classes': [
                {'index': row.label.index, 'label': row.label.label, 'n_values': row.n_values,
                 'n_pairs': row.n_pairs, 'stats': _stats_dict(row.stats)}
                for row in g.rows
            ],
            'overall': _stats_dict(g.overall),
            'within_below_overall': g.within_below_overall,
        })

    headers = ['CSS category', 'N', 'pairs', 'M', 'SD', 'MAX']
    rows = []
    for row in g.rows:
        stats = row.stats
        rows.append([
            row.label.label, str(row.n_values), str(row.n_pairs),
            r.number(stats and stats.mean), r.number(stats and stats.sd), r.number(stats and stats.max),
        ])
    if r.format == 'csv':
        return _csv(rows, headers)
    return _markdown(rows, headers)


def render_partition(universities: Sequence[str], values: Sequence[float], p: CssPartition, r: RenderSpec) -> str:
    """
    Render the class of every university, followed by the class thresholds.

    Rows are in input order.
    """
    labels = [p.label_of(c).label for c in p.assignments]
    if r.format == 'json':
        return _json({
            'thresholds': list(p.thresholds),
            'class_sizes': list(p.class_sizes),
            'requested_classes': p.requested_classes,
            'generated_classes': p.generated_classes,
            'universities': [
                {'university': u, 'value': v, 'class': c, 'label': label}
                for u, v, c, label in zip(universities, values, p.assignments, labels)
            ],
        })

    rows = [[u, r.number(v), str(c), label]
            for u, v, c, label in zip(universities, values, p.assignments, labels)]
    headers = ['University', 'value', 'class', 'label']
    threshold_rows = [[p.label_of(i + 1).label, p.label_of(i + 2).label, repr(t)]
                      for i, t in enumerate(p.thresholds)]
    threshold_headers = ['below', 'from', 'threshold']
    if r.format == 'csv':
        return _csv(rows, headers) + '\n' + _csv(threshold_rows, threshold_headers)
    return _markdown(rows, headers) + '\n' + _markdown(threshold_rows, threshold_headers)


def render_verdict(v: ComparisonVerdict, a: str, b: str, r: RenderSpec) -> str:
    """
    Render the verdict of comparing university `a` with university `b`.
    """
    if r.format == 'json':
        return _json({
            'a': a,
            'b': b,
            'indicator': v.indicator.value,
            'diff': v.diff,
            'benchmark_mean': v.benchmark_mean,
            'benchmark_max': v.benchmark_max,
            'remarkable_fraction': v.remarkable_fraction,
            'verdict': v.verdict.label,
            'rule': v.rule,
        })
    headers = ['a', 'b', 'indicator', 'diff', 'M', 'MAX', 'verdict', 'rule']
    rows = [[a, b, v.indicator.label, r.number(v.diff), r.number(v.benchmark_mean), r.number(v.benchmark_max),
             v.verdict.label, v.rule]]
    if r.format == 'csv':
        return _csv(rows, headers)
    return _markdown(rows, headers)


def render_stability(rows: Sequence[StabilityRow], r: RenderSpec) -> str:
    if r.format == 'json':
        return _json([
            {'indicator': row.indicator.value, 'statistic': row.statistic, 'n_periods': row.n_periods,
             'low': row.low, 'high': row.high, 'range': row.range}
            for row in rows
        ])
    headers = ['indicator', 'stats', 'periods', 'low', 'high', 'range']
    table = [[row.indicator.label, row.statistic, str(row.n_periods), r.number(row.low), r.number(row.high),
              r.number(row.range)] for row in rows]
    if r.format == 'csv':
        return _csv(table, headers)
    return _markdown(table, headers)
