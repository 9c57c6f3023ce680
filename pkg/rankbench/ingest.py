"""
Reading ranking result tables and slicing them into per-indicator value series.

The input is the "Results" worksheet of a ranking edition, exported as delimited text. Cells that are empty or not
numbers become absent values, independently per indicator, so a university lacking one indicator still contributes
to the others.
"""
from __future__ import annotations

import csv
import logging
import math
import os
import re
from dataclasses import dataclass
from enum import Enum
from os import PathLike
from typing import IO, Dict, Iterable, List, Mapping, Optional, Sequence, TextIO, Union

from rankbench.errors import FormatError, RowError
from rankbench.utils import period_sort_key

__all__ = ['IndicatorId', 'IndicatorRecord', 'DatasetFilter', 'REQUIRED_COLUMNS', 'DEFAULT_DELIMITER',
           'parse_results', 'read_results', 'write_results', 'filter_records', 'extract_indicator',
           'absent_counts', 'list_periods']

_logger = logging.getLogger(__name__)

DEFAULT_DELIMITER = ','

# decimal point only, no grouping, no locale comma
_NUMBER_PATTERN = re.compile(r'[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?')


class IndicatorId(str, Enum):
    """
    The size-independent indicators benchmarks can be computed for. The value of each member is its column name in
    the results table.
    """
    MNCS = 'MNCS'
    PP_top1 = 'PP_top1'
    PP_top10 = 'PP_top10'
    PP_top50 = 'PP_top50'
    PP_collab = 'PP_collab'
    PP_int_collab = 'PP_int_collab'

    @property
    def label(self) -> str:
        """
        The indicator's display name, as printed in published benchmark tables.
        """
        return _LABELS[self]

    @property
    def is_proportion(self) -> bool:
        return self is not IndicatorId.MNCS

    @classmethod
    def parse(cls, name: str) -> IndicatorId:
        """
        Look up an indicator by column name or display name.

        Raises:
            ValueError: no such indicator.
        """
        name = name.strip()
        for ind in cls:
            if name in (ind.value, ind.label):
                return ind
        raise ValueError(f'unknown indicator {name!r}, expected one of: ' + ', '.join(i.value for i in cls))

    def __str__(self):
        return self.value


_LABELS = {
    IndicatorId.MNCS: 'MNCS',
    IndicatorId.PP_top1: 'PP(top 1%)',
    IndicatorId.PP_top10: 'PP(top 10%)',
    IndicatorId.PP_top50: 'PP(top 50%)',
    IndicatorId.PP_collab: 'PP(collab)',
    IndicatorId.PP_int_collab: 'PP(int collab)',
}

UNIVERSITY_COLUMN = 'University'
FIELD_COLUMN = 'Field'
PERIOD_COLUMN = 'Period'
FRAC_COUNTING_COLUMN = 'Frac_counting'

REQUIRED_COLUMNS = (UNIVERSITY_COLUMN, FIELD_COLUMN, PERIOD_COLUMN, FRAC_COUNTING_COLUMN,
                    *(ind.value for ind in IndicatorId))


@dataclass(frozen=True)
class IndicatorRecord:
    """
    One university in one field, period and counting mode.
    """
    university: str
    field: str
    period: str
    frac_counting: bool
    """
    False for full counting.
    """
    values: Mapping[IndicatorId, Optional[float]]
    """
    Every indicator maps to its value, or to None if the source cell was empty or not a number.
    """

    def value(self, ind: IndicatorId) -> Optional[float]:
        return self.values.get(ind)


@dataclass(frozen=True)
class DatasetFilter:
    """
    Selects one field × period × counting mode cell of a results table. All three parts are mandatory.
    """
    field: str
    period: str
    frac_counting: bool

    def matches(self, record: IndicatorRecord) -> bool:
        return (record.field == self.field
                and record.period == self.period
                and record.frac_counting == self.frac_counting)


def _parse_number(cell: str) -> Optional[float]:
    """
    Parse an indicator cell, non-numeric cells are absent.
    """
    cell = cell.strip()
    if not _NUMBER_PATTERN.fullmatch(cell):
        return None
    ret = float(cell)
    if not math.isfinite(ret):
        return None
    return ret


def _parse_frac_counting(cell: str, row: int) -> bool:
    number = _parse_number(cell)
    if number == 0:
        return False
    if number == 1:
        return True
    raise RowError(f'{FRAC_COUNTING_COLUMN} must be 0 or 1, got {cell!r}', row, FRAC_COUNTING_COLUMN)


def _check_range(ind: IndicatorId, value: float, row: int):
    if value < 0:
        raise RowError(f'{ind.value} must not be negative, got {value!r}', row, ind.value)
    if ind.is_proportion and value > 1:
        raise RowError(f'{ind.value} is a proportion and must not exceed 1, got {value!r}', row, ind.value)


def parse_results(stream: Iterable[str], delimiter: str = DEFAULT_DELIMITER) -> List[IndicatorRecord]:
    """
    Parse a delimited results table.

    Args:
        stream: the text of the table, an open file or any iterable of lines.
        delimiter: the field delimiter, usually a comma, a tab or a semicolon.

    Returns:
        One record per data row, in input order.

    Raises:
        FormatError: the input is empty or a required column is missing.
        RowError: a row has an unusable University or Frac_counting cell, or an indicator value outside its range.
    """
    reader = csv.reader(stream, delimiter=delimiter)
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError('empty input, expected a header row')

    positions: Dict[str, int] = {}
    for i, name in enumerate(header):
        positions.setdefault(name.strip(), i)
    for column in REQUIRED_COLUMNS:
        if column not in positions:
            raise FormatError(f'missing required column {column!r}', column)

    university_pos = positions[UNIVERSITY_COLUMN]
    field_pos = positions[FIELD_COLUMN]
    period_pos = positions[PERIOD_COLUMN]
    frac_pos = positions[FRAC_COUNTING_COLUMN]
    indicator_pos = [(ind, positions[ind.value]) for ind in IndicatorId]
    width = max(positions[c] for c in REQUIRED_COLUMNS) + 1

    records = []
    row = reader.line_num
    for cells in reader:
        if not any(c.strip() for c in cells):
            row = reader.line_num
            continue
        row += 1
        if len(cells) < width:
            cells = cells + [''] * (width - len(cells))

        university = cells[university_pos].strip()
        if not university:
            raise RowError('empty University cell', row, UNIVERSITY_COLUMN)

        values: Dict[IndicatorId, Optional[float]] = {}
        for ind, pos in indicator_pos:
            value = _parse_number(cells[pos])
            if value is not None:
                _check_range(ind, value, row)
            values[ind] = value

        records.append(IndicatorRecord(
            university=university,
            field=cells[field_pos].strip(),
            period=cells[period_pos].strip(),
            frac_counting=_parse_frac_counting(cells[frac_pos], row),
            values=values,
        ))
        row = reader.line_num

    _logger.debug('parsed %d records', len(records))
    return records


def read_results(path: Union[str, PathLike], delimiter: str = DEFAULT_DELIMITER) -> List[IndicatorRecord]:
    """
    Read and parse a delimited results file, encoded as UTF-8 (with or without a byte order mark).

    Raises:
        FormatError: the file is not valid UTF-8 or not readable as delimited text, in addition to the errors of
            parse_results.
    """
    with open(os.fspath(path), encoding='utf-8-sig', newline='') as f:
        try:
            return parse_results(f, delimiter)
        except UnicodeDecodeError as e:
            raise FormatError(f'input is not valid UTF-8 ({e.reason}), re-export the table as UTF-8') from e
        except csv.Error as e:
            raise FormatError(f'unreadable delimited text: {e}') from e


def write_results(records: Iterable[IndicatorRecord], stream: Union[TextIO, IO[str]],
                  delimiter: str = DEFAULT_DELIMITER):
    """
    Write records as a delimited table that parse_results reads back into equal records.
    """
    writer = csv.writer(stream, delimiter=delimiter, lineterminator='\n')
    writer.writerow(REQUIRED_COLUMNS)
    for record in records:
        writer.writerow([
            record.university, record.field, record.period, int(record.frac_counting),
            *('' if record.value(ind) is None else repr(record.value(ind)) for ind in IndicatorId)
        ])


def filter_records(records: Iterable[IndicatorRecord], f: DatasetFilter) -> List[IndicatorRecord]:
    """
    Keep the records of the cell selected by `f`, preserving order.
    """
    return [r for r in records if f.matches(r)]


def extract_indicator(records: Iterable[IndicatorRecord], ind: IndicatorId) -> List[float]:
    """
    The present values of one indicator, in record order. Absent values are dropped.
    """
    ret = []
    for record in records:
        value = record.value(ind)
        if value is not None:
            ret.append(value)
    return ret


def absent_counts(records: Sequence[IndicatorRecord]) -> Dict[IndicatorId, int]:
    """
    The number of absent values per indicator.
    """
    return {ind: sum(1 for r in records if r.value(ind) is None) for ind in IndicatorId}


def list_periods(records: Iterable[IndicatorRecord]) -> List[str]:
    """
    The distinct period labels of the records, newest first.
    """
    return sorted({r.period for r in records}, key=period_sort_key)
