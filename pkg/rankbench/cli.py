from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager
from typing import Callable, Dict, Iterator, List, Optional, Sequence, TextIO

from rankbench._version import __version__
from rankbench.analysis import (
    DEFAULT_REMARKABLE_FRACTION, benchmark_stability, build_benchmark_table, compare_universities, css_group_stats,
    find_university
)
from rankbench.css import DEFAULT_CLASSES, css_partition
from rankbench.errors import DomainError, RankbenchError, UsageError
from rankbench.ingest import (
    DEFAULT_DELIMITER, DatasetFilter, IndicatorId, IndicatorRecord, absent_counts, extract_indicator, filter_records,
    list_periods, read_results
)
from rankbench.pairstats import ValueSeries, pairwise_stats_fast
from rankbench.render import (
    FORMATS, RenderSpec, render_benchmark_table, render_group_benchmark, render_partition, render_stability,
    render_verdict
)
from rankbench.utils import progress_spinner

__all__ = ['run_cli', 'main', 'DEFAULT_FIELD', 'EXIT_OK', 'EXIT_USAGE', 'EXIT_DATA']

_logger = logging.getLogger('rankbench')

DEFAULT_FIELD = 'All sciences'

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

_SINGLE_PERIOD_COMMANDS = ('css', 'css-benchmark', 'compare')

_DELIMITERS = {'comma': ',', 'tab': '\t', 'semicolon': ';'}


class _ArgumentParser(argparse.ArgumentParser):
    """
    An argument parser that raises UsageError instead of exiting, and prints help and version to `stdout` if given.
    """

    def __init__(self, *args, stdout: Optional[TextIO] = None, **kwargs):
        super().__init__(*args, **kwargs)
        self.stdout = stdout

    def error(self, message):
        raise UsageError(message)

    def _print_message(self, message, file=None):
        if message and self.stdout is not None and file is sys.stdout:
            self.stdout.write(message)
        else:
            super()._print_message(message, file)


def _delimiter(text: str) -> str:
    text = _DELIMITERS.get(text, text)
    if text == '\\t':
        text = '\t'
    if len(text) != 1:
        raise argparse.ArgumentTypeError('a delimiter must be a single character or one of: ' + ', '.join(_DELIMITERS))
    return text


def _indicator(text: str) -> IndicatorId:
    try:
        return IndicatorId.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _indicator_list(text: str) -> List[IndicatorId]:
    return [_indicator(part) for part in text.split(',') if part.strip()]


def _bounded_int(minimum: int) -> Callable[[str], int]:
    def parse(text: str) -> int:
        try:
            ret = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f'expected an integer, got {text!r}')
        if ret < minimum:
            raise argparse.ArgumentTypeError(f'must be at least {minimum}, got {ret}')
        return ret

    return parse


def _fraction(text: str) -> float:
    try:
        ret = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected a number, got {text!r}')
    if not 0 < ret <= 1:
        raise argparse.ArgumentTypeError(f'must lie in (0, 1], got {ret}')
    return ret


def _build_parser(stdout: Optional[TextIO] = None) -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument('--input', required=True, help='delimited export of the results worksheet')
    common.add_argument('--delimiter', type=_delimiter, default=DEFAULT_DELIMITER,
                        help='field delimiter: a single character, or comma, tab, semicolon (default: comma)')
    common.add_argument('--field', default=DEFAULT_FIELD, help=f'the field to analyze (default: {DEFAULT_FIELD!r})')
    common.add_argument('--period', action='append', default=None,
                        help='a period to analyze, may be repeated for benchmark and stability '
                             '(default: all periods found, or the newest one for single-period commands)')
    common.add_argument('--counting', choices=('full', 'fractional'), default='full')
    common.add_argument('--format', choices=FORMATS, default='markdown')
    common.add_argument('--precision', type=_bounded_int(0), default=2,
                        help='decimal places to display (default: 2)')
    common.add_argument('--include-counts', action='store_true', help='show the numbers of values and pairs')
    common.add_argument('--output', help='write results to this file instead of standard output')
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true')
    verbosity.add_argument('-q', '--quiet', action='store_true')

    parser = _ArgumentParser(prog='rankbench', stdout=stdout,
                             description='Benchmarks for differences between universities in ranking indicators.')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    for name, description in (('benchmark', 'mean, SD and maximum of all pairwise differences'),
                              ('stability', 'variation of the benchmarks across periods')):
        sub = subparsers.add_parser(name, parents=[common], help=description, description=description,
                                     stdout=stdout)
        sub.add_argument('--indicators', type=_indicator_list, default=list(IndicatorId),
                         help='comma separated indicators (default: all six)')
        sub.add_argument('--jobs', type=_bounded_int(1), default=1,
                         help='number of threads computing cells (default: 1)')

    for name, description in (('css', 'impact classes of every university'),
                              ('css-benchmark', 'pairwise difference benchmarks within impact classes')):
        sub = subparsers.add_parser(name, parents=[common], help=description, description=description,
                                     stdout=stdout)
        sub.add_argument('--indicator', type=_indicator, default=IndicatorId.MNCS,
                         help='the indicator to classify by (default: MNCS)')
        sub.add_argument('--classes', type=_bounded_int(2), default=DEFAULT_CLASSES,
                         help=f'number of classes requested (default: {DEFAULT_CLASSES})')

    description = 'judge the difference between two universities'
    sub = subparsers.add_parser('compare', parents=[common], help=description, description=description,
                                stdout=stdout)
    sub.add_argument('--a', required=True, help='name of the first university')
    sub.add_argument('--b', required=True, help='name of the second university')
    sub.add_argument('--indicator', type=_indicator, required=True)
    sub.add_argument('--remarkable-fraction', type=_fraction, default=DEFAULT_REMARKABLE_FRACTION,
                     help='fraction of MAX from which a difference is remarkable '
                          f'(default: {DEFAULT_REMARKABLE_FRACTION})')
    return parser


@contextmanager
def _log_to(stream: TextIO, level: int) -> Iterator[None]:
    handler = logging.StreamHandler(stream)
    handler.setFormatter(logging.Formatter('%(levelname)s: %(message)s'))
    previous_level = _logger.level
    _logger.addHandler(handler)
    _logger.setLevel(level)
    try:
        yield
    finally:
        _logger.removeHandler(handler)
        _logger.setLevel(previous_level)


class _Command:
    """
    The state of a single command line invocation.
    """

    def __init__(self, args: argparse.Namespace, spin: bool):
        self.args = args
        self.spinner = progress_spinner(spin)
        self.render_spec = RenderSpec(format=args.format, precision=args.precision,
                                      include_counts=args.include_counts)
        self.frac_counting = args.counting == 'fractional'
        self.records: List[IndicatorRecord] = []

    def load(self):
        with self.spinner(f'Reading {self.args.input} ...'):
            self.records = read_results(self.args.input, self.args.delimiter)
        _logger.info('read %d records from %s', len(self.records), self.args.input)

    def _periods_found(self) -> List[str]:
        return list_periods(r for r in self.records
                            if r.field == self.args.field and r.frac_counting == self.frac_counting)

    def periods(self) -> List[str]:
        if self.args.period:
            return self.args.period
        found = self._periods_found()
        if not found:
            raise DomainError(f'no records for field {self.args.field!r} with {self.args.counting} counting')
        return found

    def validate(self):
        if self.args.command in _SINGLE_PERIOD_COMMANDS and self.args.period and len(set(self.args.period)) > 1:
            raise UsageError(f'{self.args.command} analyzes a single period, got: ' + ', '.join(self.args.period))

    def single_period(self) -> str:
        if self.args.period:
            return self.args.period[0]
        return self.periods()[0]

    def slice(self, period: str) -> List[IndicatorRecord]:
        ret = filter_records(self.records, DatasetFilter(self.args.field, period, self.frac_counting))
        if not ret:
            raise DomainError(f'no records for field {self.args.field!r}, period {period!r} '
                              f'with {self.args.counting} counting')
        for ind, absent in absent_counts(ret).items():
            if absent:
                _logger.info('%s %s: %d of %d universities have no value', period, ind.value, absent, len(ret))
        return ret

    def _table(self):
        with self.spinner('Computing benchmarks ...'):
            return build_benchmark_table(self.records, self.periods(), self.args.indicators, self.args.field,
                                         self.frac_counting, max_workers=self.args.jobs)

    def benchmark(self) -> str:
        table = self._table()
        for (ind, period), cell in table.cells.items():
            if cell is None:
                _logger.warning('%s %s: fewer than two values, no benchmark', ind.value, period)
            else:
                _logger.debug('%s %s: %d values, %d pairs', ind.value, period, cell.n_values, cell.n_pairs)
        return render_benchmark_table(table, self.render_spec)

    def stability(self) -> str:
        return render_stability(benchmark_stability(self._table()), self.render_spec)

    def _series(self):
        period = self.single_period()
        records = [r for r in self.slice(period) if r.value(self.args.indicator) is not None]
        if not records:
            raise DomainError(f'no {self.args.indicator.value} values in period {period!r}')
        series = ValueSeries(tuple(extract_indicator(records, self.args.indicator)), self.args.indicator, period)
        return records, series

    def css(self) -> str:
        records, series = self._series()
        partition = css_partition(series, self.args.classes)
        return render_partition([r.university for r in records], series.values, partition, self.render_spec)

    def css_benchmark(self) -> str:
        _, series = self._series()
        with self.spinner('Computing class benchmarks ...'):
            group = css_group_stats(series, self.args.classes)
        if group.overall is not None:
            if group.within_below_overall:
                _logger.info('every within-class mean difference is below the overall mean difference %.4f',
                             group.overall.mean)
            else:
                _logger.warning('some within-class mean difference is not below the overall mean difference %.4f',
                                group.overall.mean)
        return render_group_benchmark(group, self.render_spec)

    def compare(self) -> str:
        period = self.single_period()
        records = self.slice(period)
        ind = self.args.indicator
        a = find_university(records, self.args.a)
        b = find_university(records, self.args.b)
        for record in (a, b):
            if record.value(ind) is None:
                raise DomainError(f'{record.university!r} has no {ind.value} value in period {period!r}')
        bench = pairwise_stats_fast(extract_indicator(records, ind))
        verdict = compare_universities(a.value(ind), b.value(ind), ind, bench, self.args.remarkable_fraction)
        return render_verdict(verdict, a.university, b.university, self.render_spec)


_COMMANDS: Dict[str, Callable[[_Command], str]] = {
    'benchmark': _Command.benchmark,
    'stability': _Command.stability,
    'css': _Command.css,
    'css-benchmark': _Command.css_benchmark,
    'compare': _Command.compare,
}


def run_cli(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None,
            stderr: Optional[TextIO] = None) -> int:
    """
    Run a rankbench command.

    Args:
        argv: the arguments, without the program name. Defaults to sys.argv[1:].
        stdout: the stream results are written to, unless --output is given. Defaults to sys.stdout.
        stderr: the stream diagnostics are written to. Defaults to sys.stderr.

    Returns:
        The exit status: 0 on success, 1 on a usage error, 2 on a data or format error.
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _build_parser(stdout)
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        stderr.write(f'{parser.prog}: error: {e}\n')
        return EXIT_USAGE
    except SystemExit as e:  # --help and --version
        return e.code if isinstance(e.code, int) else EXIT_OK

    level = logging.DEBUG if args.verbose else logging.ERROR if args.quiet else logging.INFO
    with _log_to(stderr, level):
        try:
            command = _Command(args, spin=bool(args.output) and not args.quiet and sys.stdout.isatty())
            command.validate()
            command.load()
            result = _COMMANDS[args.command](command)
        except UsageError as e:
            _logger.error('%s', e)
            return EXIT_USAGE
        except (RankbenchError, OSError) as e:
            _logger.error('%s', e)
            return EXIT_DATA

        if args.output:
            try:
                with open(args.output, 'w', encoding='utf-8', newline='') as f:
                    f.write(result)
            except OSError as e:
                _logger.error('%s', e)
                return EXIT_DATA
        else:
            stdout.write(result)
    return EXIT_OK


def main():
    sys.exit(run_cli())
