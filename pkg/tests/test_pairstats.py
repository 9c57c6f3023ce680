from itertools import combinations
from time import perf_counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from pytest import mark

from rankbench.errors import DomainError
from rankbench.ingest import IndicatorId
from rankbench.pairstats import PairwiseStats, ValueSeries, count_pairs, pairwise_stats_fast, pairwise_stats_naive

both_paths = mark.parametrize('stats_func', [pairwise_stats_naive, pairwise_stats_fast])

values = st.lists(st.floats(min_value=0, max_value=5, allow_nan=False, allow_infinity=False), min_size=3,
                  max_size=60)


def assert_matches(actual: PairwiseStats, expected: PairwiseStats, rel: float, abs_: float):
    assert actual.n_values == expected.n_values
    assert actual.n_pairs == expected.n_pairs
    assert actual.mean == pytest.approx(expected.mean, rel=rel, abs=abs_)
    assert actual.max == pytest.approx(expected.max, rel=rel, abs=abs_)
    if expected.sd is None:
        assert actual.sd is None
    else:
        assert actual.sd == pytest.approx(expected.sd, rel=rel, abs=abs_)


@mark.parametrize('x, expected', [(0, 0), (1, 0), (2, 1), (903, 407_253), (468, 109_278), (248, 30_628),
                                  (118, 6_903), (69, 2_346), (10**6, 499_999_500_000)])
def test_count_pairs(x, expected):
    assert count_pairs(x) == expected


def test_count_pairs_enumeration():
    for x in range(61):
        assert count_pairs(x) == sum(1 for _ in combinations(range(x), 2))
    for x in range(1001):
        assert count_pairs(x) == sum(len(range(i + 1, x)) for i in range(x))


def test_count_pairs_negative():
    with pytest.raises(DomainError):
        count_pairs(-1)


@both_paths
def test_hand_example(stats_func):
    stats = stats_func(ValueSeries((1.0, 2.0, 4.0), IndicatorId.MNCS, '2012-2015'))
    assert stats.n_values == 3
    assert stats.n_pairs == 3
    assert stats.mean == pytest.approx(2)
    assert stats.sd == pytest.approx(1)
    assert stats.max == pytest.approx(3)


@both_paths
@mark.parametrize('c', [0.0, 1.7, 3.0])
def test_constant(stats_func, c):
    stats = stats_func([c] * 5)
    assert stats.mean == 0
    assert stats.sd == 0
    assert stats.max == 0


@both_paths
def test_single_pair(stats_func):
    stats = stats_func([0.0, 1.0])
    assert stats.n_pairs == 1
    assert stats.mean == 1
    assert stats.max == 1
    assert stats.sd is None


@both_paths
@mark.parametrize('series', [[], [5.0]])
def test_no_pairs(stats_func, series):
    assert stats_func(series) is None


@both_paths
def test_non_finite(stats_func):
    with pytest.raises(DomainError):
        stats_func([1.0, float('nan')])


def test_value_series_rejects_non_finite():
    with pytest.raises(DomainError):
        ValueSeries((1.0, float('inf')))


def test_value_series_labels():
    unlabelled = ValueSeries([3, 1.5])
    assert unlabelled.values == (3.0, 1.5)
    assert unlabelled.indicator is None
    assert unlabelled.period is None
    labelled = ValueSeries((0.1,), IndicatorId.PP_top10, '2012-2015')
    assert labelled.indicator is IndicatorId.PP_top10
    assert labelled.period == '2012-2015'


@mark.parametrize('distribution', ['uniform', 'lognormal'])
def test_fast_matches_naive(distribution):
    rng = np.random.default_rng(20170903)
    for _ in range(500):
        n = int(rng.integers(2, 501))
        if distribution == 'uniform':
            series = rng.uniform(0, 3, n)
        else:
            series = rng.lognormal(0, 1, n)
        assert_matches(pairwise_stats_fast(series), pairwise_stats_naive(series), rel=1e-9, abs_=1e-12)


def test_fast_matches_naive_with_ties():
    rng = np.random.default_rng(5)
    for _ in range(200):
        n = int(rng.integers(2, 200))
        series = rng.integers(0, 4, n) / 4
        assert_matches(pairwise_stats_fast(series), pairwise_stats_naive(series), rel=1e-9, abs_=1e-12)


def random_series(rng, n):
    if rng.random() < 0.5:
        return rng.uniform(0, 3, n)
    return rng.lognormal(0, 0.5, n)


def test_translation_invariance():
    rng = np.random.default_rng(11)
    for _ in range(200):
        series = random_series(rng, int(rng.integers(3, 400)))
        c = rng.uniform(-5, 5)
        assert_matches(pairwise_stats_fast(series + c), pairwise_stats_fast(series), rel=1e-12, abs_=1e-12)


def test_scaling():
    rng = np.random.default_rng(12)
    for _ in range(200):
        series = random_series(rng, int(rng.integers(3, 400)))
        c = rng.uniform(0.01, 100)
        base = pairwise_stats_fast(series)
        scaled = pairwise_stats_fast(series * c)
        assert scaled.mean == pytest.approx(c * base.mean, rel=1e-12)
        assert scaled.sd == pytest.approx(c * base.sd, rel=1e-12)
        assert scaled.max == pytest.approx(c * base.max, rel=1e-12)


def test_permutation_invariance():
    rng = np.random.default_rng(13)
    for _ in range(200):
        series = random_series(rng, int(rng.integers(3, 400)))
        assert_matches(pairwise_stats_fast(rng.permutation(series)), pairwise_stats_fast(series), rel=1e-12,
                       abs_=1e-12)


@given(values)
@settings(max_examples=200, deadline=None)
def test_properties(series):
    stats = pairwise_stats_fast(series)
    assert stats.max == max(series) - min(series)
    assert 0 <= stats.mean <= stats.max
    assert stats.sd is not None
    assert stats.sd >= 0
    assert stats.n_pairs == count_pairs(len(series))


@given(values)
@settings(max_examples=200, deadline=None)
def test_oracle_equivalence_generated(series):
    assert_matches(pairwise_stats_fast(series), pairwise_stats_naive(series), rel=1e-9, abs_=1e-12)


def test_fast_large_series():
    series = np.random.default_rng(1).lognormal(0, 1, 10**6)
    start = perf_counter()
    stats = pairwise_stats_fast(series)
    elapsed = perf_counter() - start
    assert stats.n_pairs == count_pairs(10**6)
    assert stats.max == pytest.approx(series.max() - series.min())
    assert elapsed < 1


def test_naive_logs_large_series(caplog):
    series = np.arange(5001, dtype=float)
    stats = pairwise_stats_naive(series)
    assert stats.max == 5000
    assert 'pairwise_stats_fast' in caplog.text
