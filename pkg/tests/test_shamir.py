"""Secret sharing checks.

Reconstruction is cross-checked against hand-solved polynomial systems,
and the secrecy statement (any r - 1 shares carry nothing) against the
exhaustive conditional-distribution enumerator.
"""

from __future__ import annotations

import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maclfr.bits import BitBlock
from maclfr.errors import DomainError, ResourceLimitError, UsageError
from maclfr.gf import binary_field, exponent_for_share_count
from maclfr.shamir import (canonical_evaluation_points, leakage_check,
                           reconstruct, share_set_from_blocks, split)


def field_for(share_count: int):
    return binary_field(exponent_for_share_count(share_count))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 6), st.integers(1, 48), st.integers(0, 2 ** 32))
def test_split_reconstruct_round_trip(share_count, secret_bits, seed):
    field = field_for(share_count)
    rng = random.Random(seed)
    secret = BitBlock.random(rng, secret_bits)
    shares = split(secret, share_count, field, rng)
    assert shares.share_count == share_count
    assert reconstruct(shares) == secret
    # Packing the shares into blocks and back must not change anything.
    blocks = [shares.share_block(j) for j in range(1, share_count + 1)]
    rebuilt = share_set_from_blocks(blocks, field, secret_bits)
    assert reconstruct(rebuilt) == secret


def test_share_values_match_hand_evaluation():
    # One 2-bit symbol in GF(4), polynomial s + c x evaluated at 1 and 2:
    # share1 = s ^ c, share2 = s ^ (c * x) with x = 0b10.
    field = binary_field(2)
    secret = BitBlock(0b11, 2)
    shares = split(secret, 2, field, coefficients=[(0b01,)])
    assert shares.shares[0] == (0b11 ^ 0b01,)
    assert shares.shares[1] == (0b11 ^ field.mul(0b01, 0b10),)
    assert reconstruct(shares) == secret


def test_single_share_is_the_secret():
    field = field_for(1)
    secret = BitBlock(0b1011, 4)
    shares = split(secret, 1, field)
    assert shares.share_block(1).truncate(4) == secret
    assert reconstruct(shares) == secret


def test_fewer_than_all_shares_reveal_nothing_exhaustively():
    # Every proper subset of shares has a secret-independent distribution
    # when the blinding coefficients are uniform.
    for share_count, num_symbols in ((2, 2), (3, 1)):
        field = field_for(share_count)
        for size in range(1, share_count):
            for positions in combinations(range(1, share_count + 1), size):
                dists = leakage_check(num_symbols, share_count, field,
                                      positions)
                reference = None
                for secret, counter in dists.items():
                    if reference is None:
                        reference = counter
                    assert counter == reference, (positions, secret)


def test_all_shares_determine_the_secret():
    # With every share observed the map secret -> share tuple is injective,
    # so full observation is the opposite of the leakage case.  Checked by
    # explicit reconstruction over all coefficient choices.
    field = binary_field(2)
    for secret_value in range(4):
        secret = BitBlock(secret_value, 2)
        for c in range(4):
            shares = split(secret, 2, field, coefficients=[(c,)])
            assert reconstruct(shares) == secret


def test_tail_padding_is_dropped():
    # 3 secret bits in GF(4) symbols occupy 2 symbols = 4 bits of shares.
    field = binary_field(2)
    secret = BitBlock(0b101, 3)
    shares = split(secret, 2, field, random.Random(0))
    assert shares.share_bits == 4
    assert reconstruct(shares) == secret


def test_validation_errors():
    field = binary_field(2)
    secret = BitBlock(0b1, 2)
    with pytest.raises(UsageError):
        split(secret, 2, field)  # no coefficient source
    with pytest.raises(UsageError):
        split(secret, 2, field, random.Random(0), coefficients=[(1,)])
    with pytest.raises(UsageError):
        split(secret, 2, field, coefficients=[(1,), (2,)])
    with pytest.raises(UsageError):
        split(secret, 2, field, coefficients=[(1, 2)])
    with pytest.raises(DomainError):
        canonical_evaluation_points(field, 4)
    with pytest.raises(DomainError):
        canonical_evaluation_points(field, 0)
    with pytest.raises(DomainError):
        share_set_from_blocks([BitBlock(0, 2), BitBlock(0, 4)], field, 2)
    shares = split(secret, 2, field, random.Random(0))
    with pytest.raises(UsageError):
        shares.share_block(3)


def test_leakage_check_guards():
    field = binary_field(2)
    with pytest.raises(UsageError):
        leakage_check(1, 2, field, (1, 1))
    with pytest.raises(UsageError):
        leakage_check(1, 2, field, (3,))
    with pytest.raises(UsageError):
        leakage_check(1, 2, field, (1, 2))
    with pytest.raises(ResourceLimitError):
        leakage_check(8, 3, field, (1,), cap=10)
