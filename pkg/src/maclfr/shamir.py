"""Threshold secret sharing for superposed keys.

An r-of-r Shamir split over GF(2^l): the secret bit string is chopped into
l-bit symbols (zero padded at the tail) and each symbol becomes the
constant term of an independent uniform polynomial of degree r - 1.  Share
j is the evaluation at the j-th canonical point, which is simply the field
element of value j; minimality of l (r < 2^l) guarantees the points
1..r are distinct and nonzero.  All r shares reconstruct the secret by
interpolating each symbol's constant term, while any r - 1 of them are
statistically independent of it.  r = 1 degenerates to storing the secret
verbatim.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .bits import BitBlock
from .errors import DomainError, ResourceLimitError, UsageError
from .gf import BinaryField

DEFAULT_LEAKAGE_CAP = 1 << 24


def canonical_evaluation_points(field: BinaryField, share_count: int
                                ) -> tuple[int, ...]:
    """The first share_count nonzero elements in value order: 1, 2, ..."""
    if share_count < 1:
        raise DomainError(f"share count must be positive, got {share_count}")
    if share_count >= field.order:
        raise DomainError(
            f"{share_count} shares need a field of order > {share_count}, "
            f"got {field.order}")
    return tuple(range(1, share_count + 1))


@dataclass(frozen=True)
class ShareSet:
    """The r shares of one secret, as parallel symbol vectors."""

    field: BinaryField
    share_count: int
    secret_bits: int
    evaluation_points: tuple[int, ...]
    shares: tuple[tuple[int, ...], ...]  # shares[j-1] = symbols of share j

    def __post_init__(self) -> None:
        if len(self.shares) != self.share_count:
            raise DomainError(
                f"expected {self.share_count} shares, got {len(self.shares)}")
        if len(self.evaluation_points) != self.share_count:
            raise DomainError("one evaluation point per share required")
        counts = {len(s) for s in self.shares}
        if len(counts) > 1:
            raise DomainError("shares must all have the same symbol count")

    @property
    def symbols_per_share(self) -> int:
        return len(self.shares[0])

    @property
    def share_bits(self) -> int:
        return self.symbols_per_share * self.field.exponent

    def share_block(self, index: int) -> BitBlock:
        """Share `index` (1-based) packed into a bit string."""
        if not 1 <= index <= self.share_count:
            raise UsageError(f"share index {index} outside [1, {self.share_count}]")
        return BitBlock.from_symbols(self.shares[index - 1], self.field.exponent)


def _secret_symbols(secret: BitBlock, field: BinaryField) -> tuple[int, ...]:
    return secret.to_symbols(field.exponent)


def split(secret: BitBlock, share_count: int, field: BinaryField,
          rng: random.Random | None = None,
          coefficients: Sequence[Sequence[int]] | None = None) -> ShareSet:
    """Split the secret into share_count shares.

    Coefficients of the hiding polynomials come either from rng or from an
    explicit per-symbol list of (share_count - 1) field values; exactly one
    of the two sources must be given (none for share_count == 1, where the
    polynomial is the constant itself).
    """
    points = canonical_evaluation_points(field, share_count)
    symbols = _secret_symbols(secret, field)
    blinds = share_count - 1
    if coefficients is not None:
        if rng is not None:
            raise UsageError("pass either rng or coefficients, not both")
        if len(coefficients) != len(symbols):
            raise UsageError(
                f"expected coefficients for {len(symbols)} symbols, "
                f"got {len(coefficients)}")
        rows = [tuple(c) for c in coefficients]
        for row in rows:
            if len(row) != blinds:
                raise UsageError(f"each symbol needs {blinds} coefficients")
    elif blinds == 0:
        rows = [() for _ in symbols]
    elif rng is None:
        raise UsageError("a coefficient source is required for share_count > 1")
    else:
        rows = [tuple(rng.getrandbits(field.exponent) for _ in range(blinds))
                for _ in symbols]
    shares = tuple(
        tuple(field.poly_eval((sym,) + row, x) for sym, row in zip(symbols, rows))
        for x in points)
    return ShareSet(field, share_count, secret.length, points, shares)


def share_set_from_blocks(blocks: Sequence[BitBlock], field: BinaryField,
                          secret_bits: int) -> ShareSet:
    """Rebuild a ShareSet from the packed share blocks in index order."""
    share_count = len(blocks)
    points = canonical_evaluation_points(field, share_count)
    expected = -(-secret_bits // field.exponent) * field.exponent
    shares = []
    for b in blocks:
        if b.length != expected:
            raise DomainError(
                f"share block of {b.length} bits, expected {expected}")
        shares.append(b.to_symbols(field.exponent))
    return ShareSet(field, share_count, secret_bits, points, tuple(shares))


def reconstruct(shares: ShareSet) -> BitBlock:
    """Interpolate every symbol's constant term and drop the tail padding."""
    field = shares.field
    symbols = []
    for k in range(shares.symbols_per_share):
        pts = [(x, shares.shares[j][k])
               for j, x in enumerate(shares.evaluation_points)]
        symbols.append(field.interpolate_constant(pts))
    return BitBlock.from_symbols(symbols, field.exponent, shares.secret_bits)


def leakage_check(num_symbols: int, share_count: int, field: BinaryField,
                  observed_positions: Sequence[int],
                  cap: int = DEFAULT_LEAKAGE_CAP
                  ) -> dict[tuple[int, ...], Counter]:
    """Conditional distribution of an observed share subset given the secret.

    Enumerates every secret and every coefficient assignment, and returns,
    for each secret (as a symbol tuple), the counts of observed share
    tuples.  Secrecy holds iff the counters are identical across secrets.
    Exhaustive by design, so the state space is capped.
    """
    positions = tuple(observed_positions)
    if len(set(positions)) != len(positions):
        raise UsageError("observed positions must be distinct")
    if any(not 1 <= p <= share_count for p in positions):
        raise UsageError(f"positions {positions} outside [1, {share_count}]")
    if len(positions) > share_count - 1:
        raise UsageError("observe at most share_count - 1 positions")
    points = canonical_evaluation_points(field, share_count)
    blinds = share_count - 1
    secret_space = field.order ** num_symbols
    coeff_space = field.order ** (num_symbols * blinds)
    if secret_space * coeff_space > cap:
        raise ResourceLimitError(
            f"leakage enumeration of {secret_space * coeff_space} states "
            f"exceeds cap {cap}")
    out: dict[tuple[int, ...], Counter] = {}
    for secret in product(range(field.order), repeat=num_symbols):
        counter: Counter = Counter()
        for coeffs in product(range(field.order), repeat=num_symbols * blinds):
            rows = [coeffs[k * blinds:(k + 1) * blinds]
                    for k in range(num_symbols)]
            observed = tuple(
                tuple(field.poly_eval((sym,) + tuple(row), points[p - 1])
                      for sym, row in zip(secret, rows))
                for p in positions)
            counter[observed] += 1
        out[secret] = counter
    return out
