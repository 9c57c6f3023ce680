import io
import os
from pathlib import Path
from typing import List

from pytest import fixture

from rankbench.ingest import IndicatorRecord, parse_results

RESULTS_CSV = '''\
Rank,University,Field,Period,Frac_counting,MNCS,PP_top1,PP_top10,PP_top50,PP_collab,PP_int_collab
1,Univ A,All sciences,2012-2015,0,1.0,0.01,0.10,0.50,0.80,0.40
2,Univ B,All sciences,2012-2015,0,2.0,0.02,0.12,0.55,0.85,n/a
3,Univ C,All sciences,2012-2015,0,4.0,0.03,0.20,0.60,,0.50
1,Univ A,All sciences,2011-2014,0,1.5,0.01,0.11,0.52,0.81,0.41
2,Univ B,All sciences,2011-2014,0,1.5,0.02,0.11,0.52,0.82,0.42
1,Univ A,All sciences,2012-2015,1,0.9,0.01,0.09,0.49,0.79,0.39
1,Univ A,Life sciences,2012-2015,0,1.1,0.01,0.10,0.51,0.70,0.30
4,"Univ, D",All sciences,2006-2009,0,0.7,0.00,0.05,0.45,0.75,0.35
'''


@fixture
def results_text() -> str:
    return RESULTS_CSV


@fixture
def records() -> List[IndicatorRecord]:
    return parse_results(io.StringIO(RESULTS_CSV))


@fixture
def results_file(tmp_path) -> Path:
    """A results table on disk, for the command line
    """
    path = tmp_path / 'results.csv'
    path.write_text(RESULTS_CSV, encoding='utf-8')
    return path


@fixture(scope="session")
def leiden_2017_path() -> Path:
    """The exported results worksheet of the 2017 edition, tests using it are skipped when it is unavailable
    """
    from pytest import skip

    path = os.environ.get('RANKBENCH_LEIDEN_CSV')
    if not path or not os.path.isfile(path):
        skip('RANKBENCH_LEIDEN_CSV does not point to the exported results worksheet')
    return Path(path)
