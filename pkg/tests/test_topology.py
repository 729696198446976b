"""Subset bookkeeping checks.

Ranking oracles are exhaustive comparisons against itertools.combinations,
which the ranking code never calls on the rank/unrank path.
"""

from __future__ import annotations

import itertools
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from maclfr.errors import DomainError, UsageError
from maclfr.topology import (TopologySpec, enumerate_subsets,
                             share_index_of_cache, subset_rank, subset_unrank,
                             validate_subset)


def test_enumeration_is_lex_ordered_and_complete():
    for n in range(0, 7):
        for k in range(0, n + 2):
            subsets = enumerate_subsets(n, k)
            assert subsets == tuple(
                itertools.combinations(range(1, n + 1), k))
            assert len(subsets) == (comb(n, k) if k <= n else 0)
            assert list(subsets) == sorted(subsets)


def test_rank_unrank_round_trip_exhaustive():
    for n in range(1, 8):
        for k in range(0, n + 1):
            for expected_rank, subset in enumerate(enumerate_subsets(n, k)):
                assert subset_rank(subset, n) == expected_rank
                assert subset_unrank(expected_rank, n, k) == subset


@given(st.integers(1, 20), st.data())
def test_rank_unrank_round_trip_sampled(n, data):
    k = data.draw(st.integers(0, n))
    rank = data.draw(st.integers(0, comb(n, k) - 1))
    subset = subset_unrank(rank, n, k)
    assert len(subset) == k
    assert subset_rank(subset, n) == rank


def test_rank_validation():
    with pytest.raises(UsageError):
        subset_rank((2, 1), 3)
    with pytest.raises(UsageError):
        subset_rank((0, 1), 3)
    with pytest.raises(UsageError):
        subset_rank((1, 4), 3)
    with pytest.raises(DomainError):
        subset_unrank(3, 3, 2)
    with pytest.raises(UsageError):
        enumerate_subsets(-1, 2)
    assert validate_subset((1, 3), 3) == (1, 3)


def test_share_index_is_position_within_user():
    assert share_index_of_cache((2, 5, 7), 2) == 1
    assert share_index_of_cache((2, 5, 7), 5) == 2
    assert share_index_of_cache((2, 5, 7), 7) == 3
    with pytest.raises(DomainError):
        share_index_of_cache((2, 5, 7), 3)


def test_topology_counts():
    topo = TopologySpec(5, 2, 2)
    assert topo.num_users == comb(5, 2) == 10
    assert topo.num_subfile_indices == comb(5, 2) == 10
    assert topo.num_transmissions == comb(5, 4) == 5
    assert topo.missing_per_user == comb(3, 2) == 3
    assert len(topo.users()) == topo.num_users
    assert len(topo.subfile_indices()) == topo.num_subfile_indices
    assert len(topo.transmission_indices()) == topo.num_transmissions


def test_accessibility_is_intersection():
    topo = TopologySpec(4, 2, 1)
    for user in topo.users():
        for index in topo.subfile_indices():
            assert topo.accessible(user, index) == bool(set(user) & set(index))
    # Every user misses exactly missing_per_user indices.
    for user in topo.users():
        missed = sum(not topo.accessible(user, ix)
                     for ix in topo.subfile_indices())
        assert missed == topo.missing_per_user


def test_every_transmission_serves_each_contained_user_once():
    # For a (t + r)-set S and a user g inside it, the piece g decodes from
    # S is indexed by S \ g, which is a t-set disjoint from g.
    topo = TopologySpec(5, 2, 1)
    for S in topo.transmission_indices():
        members = [g for g in topo.users() if set(g) <= set(S)]
        assert len(members) == comb(len(S), topo.access_degree)
        for g in members:
            piece = tuple(sorted(set(S) - set(g)))
            assert len(piece) == topo.replication
            assert not topo.accessible(g, piece)


def test_parameter_validation():
    with pytest.raises(DomainError):
        TopologySpec(0, 1, 0)
    with pytest.raises(DomainError):
        TopologySpec(3, 4, 0)
    with pytest.raises(DomainError):
        TopologySpec(3, 2, 2)
    with pytest.raises(DomainError):
        TopologySpec(3, 0, 1)
