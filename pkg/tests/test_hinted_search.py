import math

import pytest
from hypothesis import given, strategies as st

from augur.hinted_search import binary_find, hinted_find, probe_bound, true_position
from oracles import linear_find


def test_close_hint_is_cheap():
    out = hinted_find(list(range(1000)), 500, 496)
    assert (out.found, out.index, out.probes) == (True, 500, 5)


def test_absent_query_returns_insertion_index():
    out = hinted_find(list(range(1000)), 500.5, 496)
    assert (out.found, out.index) == (False, 501)
    assert out.probes <= probe_bound(5)


def test_binary_search_probe_count():
    assert binary_find(list(range(1024)), 700).probes == 10


def test_exact_hint():
    out = hinted_find([1, 3, 5, 7], 5, 2)
    assert (out.found, out.index) == (True, 2) and out.probes <= probe_bound(0)


def test_duplicates_return_lowest_index():
    values = [1, 2, 2, 2, 2, 3]
    for hint in range(len(values)):
        assert hinted_find(values, 2, hint).index == 1
    assert binary_find(values, 2).index == 1


def test_empty_and_extremes():
    with pytest.raises(ValueError):
        hinted_find([], 5, 0)
    assert hinted_find([2, 4], 1, 1).index == 0
    assert hinted_find([2, 4], 9, 0).index == 2


def test_true_position():
    assert true_position([1, 3, 3, 7], 3) == 1
    assert true_position([1, 3, 3, 7], 5) == 2
    assert true_position([1, 3, 3, 7], 0) == 0


def test_probe_bound():
    assert probe_bound(0) == 4
    assert probe_bound(1) == 6
    assert probe_bound(7) == 2 * math.ceil(math.log2(8)) + 4
    with pytest.raises(ValueError):
        probe_bound(-1)


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=60).map(sorted),
       st.integers(-60, 60), st.integers(-5, 70))
def test_matches_linear_scan_and_bound(values, query, hint):
    out = hinted_find(values, query, hint)
    assert (out.found, out.index) == linear_find(values, query)
    t = true_position(values, query)
    h = min(max(hint, 0), len(values) - 1)
    assert out.probes <= probe_bound(abs(h - t))


def test_single_element_and_large_binary():
    out = binary_find([42], 42)
    assert (out.found, out.index, out.probes) == (True, 0, 1)
    values = list(range(0, 2048, 2))
    for q in (0, 2, 1000, 2046):
        assert binary_find(values, q).probes <= 11
