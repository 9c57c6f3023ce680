from rankbench._version import __version__
from rankbench.analysis import (
    BenchmarkTable, ComparisonVerdict, GroupBenchmark, GroupRow, StabilityRow, Verdict, benchmark_stability,
    build_benchmark_table, compare_universities, css_group_stats, find_university
)
from rankbench.css import CssClassLabel, CssPartition, assign_class, class_labels, css_partition
from rankbench.errors import DomainError, FormatError, RankbenchError, RowError, UnknownUniversityError, UsageError
from rankbench.ingest import (
    DatasetFilter, IndicatorId, IndicatorRecord, extract_indicator, filter_records, list_periods, parse_results,
    read_results, write_results
)
from rankbench.pairstats import PairwiseStats, ValueSeries, count_pairs, pairwise_stats_fast, pairwise_stats_naive
from rankbench.render import (
    RenderSpec, render_benchmark_table, render_group_benchmark, render_partition, render_stability, render_verdict
)

__all__ = [
    '__version__',
    'IndicatorId', 'IndicatorRecord', 'DatasetFilter',
    'parse_results', 'read_results', 'write_results', 'filter_records', 'extract_indicator', 'list_periods',
    'ValueSeries', 'PairwiseStats', 'count_pairs', 'pairwise_stats_naive', 'pairwise_stats_fast',
    'CssClassLabel', 'CssPartition', 'css_partition', 'assign_class', 'class_labels',
    'BenchmarkTable', 'GroupRow', 'GroupBenchmark', 'Verdict', 'ComparisonVerdict', 'StabilityRow',
    'build_benchmark_table', 'css_group_stats', 'compare_universities', 'benchmark_stability', 'find_university',
    'RenderSpec', 'render_benchmark_table', 'render_group_benchmark', 'render_partition', 'render_verdict',
    'render_stability',
    'RankbenchError', 'FormatError', 'RowError', 'DomainError', 'UnknownUniversityError', 'UsageError',
]
