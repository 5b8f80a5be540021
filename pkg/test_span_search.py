#!/usr/bin/env python3
"""
Span Search Test - e(P) as the smallest spread and x(P) as the largest span
"""

import pytest

from errors import DisconnectedPoset
from poset_core import antichain, butterfly, chain, complete_multipartite, diamond, m_values, vee
from span_search import SpanSearch, max_span, min_spread


@pytest.mark.parametrize("k", range(1, 6))
def test_chain_spread(k):
    assert min_spread(chain(k + 1)) == k


def test_small_posets():
    assert min_spread(chain(1)) == 0
    assert min_spread(antichain(3)) == 0
    assert min_spread(vee(2)) == 1
    assert min_spread(vee(2), induced=True) == 1
    assert min_spread(butterfly()) == 2
    assert min_spread(complete_multipartite(2, 1, 2)) == 2


@pytest.mark.parametrize("s", range(2, 7))
def test_diamond_spread_is_m_s(s):
    assert min_spread(diamond(s)) == m_values(s).m_s


@pytest.mark.slow
@pytest.mark.parametrize("s", range(7, 11))
def test_diamond_spread_is_m_s_larger(s):
    assert min_spread(diamond(s)) == m_values(s).m_s


@pytest.mark.parametrize("s", range(2, 6))
def test_induced_diamond_spread_is_m_star_s(s):
    assert min_spread(diamond(s), induced=True) == m_values(s).m_star_s


@pytest.mark.slow
@pytest.mark.parametrize("s", range(6, 9))
def test_induced_diamond_spread_is_m_star_s_larger(s):
    assert min_spread(diamond(s), induced=True) == m_values(s).m_star_s


def test_max_span_witness():
    result = max_span(vee(2))
    assert result.span == 2
    assert result.spread == 1
    bottom, left, right = result.witness.assignment
    assert bottom & left == bottom and bottom & right == bottom
    assert len({bottom, left, right}) == 3
    assert result.witness.span == result.span


def test_chain_span_equals_spread():
    assert max_span(chain(4)).span == 3


def test_disconnected_search_is_refused():
    with pytest.raises(DisconnectedPoset):
        SpanSearch(antichain(2))


def test_spread_below_height_has_no_copy():
    assert not SpanSearch(chain(3)).exists(1).found
    assert SpanSearch(chain(3)).exists(2).found
