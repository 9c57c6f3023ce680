import io
import random

import pytest
from pytest import mark

from rankbench.errors import FormatError, RowError
from rankbench.ingest import (
    REQUIRED_COLUMNS, DatasetFilter, IndicatorId, absent_counts, extract_indicator, filter_records, list_periods,
    parse_results, read_results, write_results
)

ALL_FULL_2015 = DatasetFilter('All sciences', '2012-2015', False)
HEADER = ','.join(REQUIRED_COLUMNS)


def parse(text, **kwargs):
    return parse_results(io.StringIO(text), **kwargs)


def test_parse_single_row():
    records = parse(HEADER + '\nU1,All sciences,2012-2015,0,1.20,0.01,0.1,0.5,0.8,0.4\n')
    assert len(records) == 1
    record, = records
    assert record.university == 'U1'
    assert record.field == 'All sciences'
    assert record.period == '2012-2015'
    assert record.frac_counting is False
    assert record.value(IndicatorId.MNCS) == 1.20
    assert record.value(IndicatorId.PP_int_collab) == 0.4


def test_parse_non_numeric_is_absent():
    records = parse(HEADER + '\nU1,All sciences,2012-2015,1,n/a,0.01,0.1,0.5,0.8,0.4\n')
    record, = records
    assert record.frac_counting is True
    assert record.value(IndicatorId.MNCS) is None
    assert record.value(IndicatorId.PP_top1) == 0.01
    assert record.value(IndicatorId.PP_int_collab) == 0.4


@mark.parametrize('cell', ['', '  ', 'n/a', '-', '1,20', 'nan', 'inf', '1_000', '0x10'])
def test_parse_absent_spellings(cell):
    records = parse(HEADER + f'\nU1,All sciences,2012-2015,0,"{cell}",0.01,0.1,0.5,0.8,0.4\n')
    assert records[0].value(IndicatorId.MNCS) is None


@mark.parametrize('cell, expected', [(' 1.5 ', 1.5), ('.5', 0.5), ('2.', 2.0), ('1e-1', 0.1), ('+3', 3.0)])
def test_parse_number_spellings(cell, expected):
    records = parse(HEADER + f'\nU1,All sciences,2012-2015,0,{cell},0.01,0.1,0.5,0.8,0.4\n')
    assert records[0].value(IndicatorId.MNCS) == expected


def test_parse_missing_column():
    header = HEADER.replace(',PP_int_collab', '')
    with pytest.raises(FormatError) as excinfo:
        parse(header + '\nU1,All sciences,2012-2015,0,1.0,0.01,0.1,0.5,0.8\n')
    assert excinfo.value.column == 'PP_int_collab'
    assert 'PP_int_collab' in str(excinfo.value)


def test_parse_header_is_case_sensitive():
    with pytest.raises(FormatError) as excinfo:
        parse(HEADER.replace('MNCS', 'mncs') + '\n')
    assert excinfo.value.column == 'MNCS'


def test_parse_header_whitespace_and_order():
    header = ' PP_int_collab , MNCS,University,Field,Period,Frac_counting,PP_top1,PP_top10,PP_top50,PP_collab,Extra'
    records = parse(header + '\n0.4,1.5,U1,All sciences,2012-2015,0,0.01,0.1,0.5,0.8,whatever\n')
    assert records[0].value(IndicatorId.MNCS) == 1.5
    assert records[0].value(IndicatorId.PP_int_collab) == 0.4


def test_parse_empty_input():
    with pytest.raises(FormatError, match='empty'):
        parse('')


def test_parse_blank_header():
    with pytest.raises(FormatError) as excinfo:
        parse('\n')
    assert excinfo.value.column == 'University'


def test_parse_header_only():
    assert parse(HEADER + '\n') == []


def test_parse_bad_frac_counting():
    text = HEADER + '\nU1,All sciences,2012-2015,0,1.0,,,,,\nU2,All sciences,2012-2015,yes,1.0,,,,,\n'
    with pytest.raises(RowError) as excinfo:
        parse(text)
    assert excinfo.value.row == 3
    assert excinfo.value.column == 'Frac_counting'


def test_parse_row_number_counts_multiline_cells():
    text = HEADER + '\n"U\n1",All sciences,2012-2015,0,1.0,,,,,\nU2,All sciences,2012-2015,2,1.0,,,,,\n'
    with pytest.raises(RowError) as excinfo:
        parse(text)
    assert excinfo.value.row == 4


@mark.parametrize('column, cell', [('MNCS', '-0.1'), ('PP_top10', '1.2'), ('PP_collab', '-0.01')])
def test_parse_out_of_range(column, cell):
    values = dict.fromkeys(ind.value for ind in IndicatorId)
    values[column] = cell
    row = 'U1,All sciences,2012-2015,0,' + ','.join(v or '' for v in values.values())
    with pytest.raises(RowError) as excinfo:
        parse(HEADER + '\n' + row + '\n')
    assert excinfo.value.column == column
    assert excinfo.value.row == 2


def test_parse_empty_university():
    with pytest.raises(RowError):
        parse(HEADER + '\n ,All sciences,2012-2015,0,1.0,,,,,\n')


def test_parse_other_delimiter():
    text = HEADER.replace(',', ';') + '\nU1;All sciences;2012-2015;0;1.5;;;;;\n'
    assert parse(text, delimiter=';')[0].value(IndicatorId.MNCS) == 1.5


def test_parse_quoted_delimiter(records):
    assert [r.university for r in records][-1] == 'Univ, D'


def test_filter_field(records):
    kept = filter_records(records, ALL_FULL_2015)
    assert [r.university for r in kept] == ['Univ A', 'Univ B', 'Univ C']
    assert all(r.field == 'All sciences' for r in kept)


def test_filter_no_match(records):
    assert filter_records(records, DatasetFilter('All sciences', '2000-2003', False)) == []


def test_filter_counting(records):
    kept = filter_records(records, DatasetFilter('All sciences', '2012-2015', True))
    assert [r.university for r in kept] == ['Univ A']
    assert kept[0].value(IndicatorId.MNCS) == 0.9


def test_extract_drops_absent(records):
    cell = filter_records(records, ALL_FULL_2015)
    assert extract_indicator(cell, IndicatorId.MNCS) == [1.0, 2.0, 4.0]
    assert extract_indicator(cell, IndicatorId.PP_collab) == [0.80, 0.85]
    assert extract_indicator(cell, IndicatorId.PP_int_collab) == [0.40, 0.50]


def test_extract_empty():
    assert extract_indicator([], IndicatorId.MNCS) == []


def test_extract_length_plus_absent(records):
    cell = filter_records(records, ALL_FULL_2015)
    absent = absent_counts(cell)
    for ind in IndicatorId:
        assert len(extract_indicator(cell, ind)) + absent[ind] == len(cell)
    assert absent[IndicatorId.PP_collab] == 1


def test_permuting_rows_permutes_series(results_text):
    header, *rows = results_text.splitlines()
    shuffled = rows[:]
    random.Random(7).shuffle(shuffled)
    original = filter_records(parse('\n'.join([header, *rows])), ALL_FULL_2015)
    permuted = filter_records(parse('\n'.join([header, *shuffled])), ALL_FULL_2015)
    assert sorted(original, key=lambda r: r.university) == sorted(permuted, key=lambda r: r.university)
    order = [r.university for r in permuted]
    by_name = {r.university: r.value(IndicatorId.MNCS) for r in original}
    assert extract_indicator(permuted, IndicatorId.MNCS) == [by_name[u] for u in order]


def test_write_round_trip(records):
    out = io.StringIO()
    write_results(records, out)
    out.seek(0)
    assert parse_results(out) == records


def test_write_round_trip_tab(records):
    out = io.StringIO()
    write_results(records, out, delimiter='\t')
    out.seek(0)
    assert parse_results(out, delimiter='\t') == records


def test_read_results_with_bom(tmp_path, results_text):
    path = tmp_path / 'bom.csv'
    path.write_bytes(b'\xef\xbb\xbf' + results_text.encode('utf-8'))
    records = read_results(path)
    assert len(records) == 8
    assert records[0].university == 'Univ A'


def test_read_results_not_utf8(tmp_path, results_text):
    # a spreadsheet export in a legacy windows code page
    path = tmp_path / 'cp1252.csv'
    path.write_bytes(results_text.replace('Univ C', 'Université C').encode('cp1252'))
    with pytest.raises(FormatError, match='UTF-8') as excinfo:
        read_results(path)
    assert isinstance(excinfo.value.__cause__, UnicodeDecodeError)


def test_read_results_oversized_field(tmp_path):
    path = tmp_path / 'huge.csv'
    path.write_text(HEADER + '\n"' + 'x' * 200_000 + '",All sciences,2012-2015,0,1.0,,,,,\n', encoding='utf-8')
    with pytest.raises(FormatError):
        read_results(path)


def test_list_periods_newest_first(records):
    assert list_periods(records) == ['2012-2015', '2011-2014', '2006-2009']


def test_indicator_parse():
    assert IndicatorId.parse('PP(top 10%)') is IndicatorId.PP_top10
    assert IndicatorId.parse('PP_int_collab') is IndicatorId.PP_int_collab
    with pytest.raises(ValueError):
        IndicatorId.parse('TNCS')
    assert [ind.value for ind in IndicatorId] == [
        'MNCS', 'PP_top1', 'PP_top10', 'PP_top50', 'PP_collab', 'PP_int_collab'
    ]
