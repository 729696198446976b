"""Fixed-length bit strings.

Everything the schemes move around (files, subfiles, keys, key shares,
transmission payloads) is a bit string of known length, so we wrap a plain
int in a small immutable value type instead of juggling (value, length)
pairs by hand.  Bit i of the string is bit i of the int, i.e. the first
bit is the least significant one.  Byte serialization follows the same
order: bit i lands in byte i // 8, position i % 8, and any padding bits
in the last byte are zero.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DomainError, IntegrityError, UsageError


@dataclass(frozen=True)
class BitBlock:
    """An immutable bit string of fixed length."""

    value: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise DomainError(f"negative bit length {self.length}")
        if self.value < 0 or self.value >> self.length:
            raise DomainError(
                f"value does not fit in {self.length} bits: {self.value:#x}"
            )

    # ---- constructors ----

    @classmethod
    def zeros(cls, length: int) -> "BitBlock":
        return cls(0, length)

    @classmethod
    def random(cls, rng: random.Random, length: int) -> "BitBlock":
        return cls(rng.getrandbits(length) if length else 0, length)

    @classmethod
    def from_bits(cls, bits: "list[int] | tuple[int, ...]") -> "BitBlock":
        value = 0
        for i, b in enumerate(bits):
            if b not in (0, 1):
                raise DomainError(f"bit {i} is {b}, expected 0 or 1")
            value |= b << i
        return cls(value, len(bits))

    @classmethod
    def from_bytes(cls, data: bytes, length: int) -> "BitBlock":
        if len(data) != (length + 7) // 8:
            raise UsageError(
                f"expected {(length + 7) // 8} bytes for {length} bits, got {len(data)}"
            )
        value = int.from_bytes(data, "little")
        if value >> length:
            raise IntegrityError(f"nonzero padding bits beyond length {length}")
        return cls(value, length)

    @classmethod
    def from_symbols(cls, symbols: "tuple[int, ...] | list[int]", symbol_bits: int,
                     length: "int | None" = None) -> "BitBlock":
        """Inverse of to_symbols.  length defaults to len(symbols) * symbol_bits."""
        value = 0
        for i, s in enumerate(symbols):
            if s < 0 or s >> symbol_bits:
                raise DomainError(f"symbol {i} does not fit in {symbol_bits} bits")
            value |= s << (i * symbol_bits)
        full = len(symbols) * symbol_bits
        if length is None:
            length = full
        if length > full:
            raise UsageError(f"length {length} exceeds {full} symbol bits")
        # Truncation drops zero padding introduced when the block was built;
        # any other truncation is a caller error we cannot detect here.
        return cls(value & ((1 << length) - 1), length)

    # ---- accessors ----

    def bit(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise UsageError(f"bit index {i} out of range [0, {self.length})")
        return (self.value >> i) & 1

    def take(self, start: int, nbits: int) -> "BitBlock":
        """Bits [start, start + nbits); reads beyond the end are zero padding."""
        if start < 0 or nbits < 0:
            raise UsageError("negative slice bounds")
        return BitBlock((self.value >> start) & ((1 << nbits) - 1), nbits)

    def to_symbols(self, symbol_bits: int) -> tuple[int, ...]:
        """Split into ceil(length / symbol_bits) symbols, zero padding the tail."""
        if symbol_bits <= 0:
            raise UsageError(f"symbol width must be positive, got {symbol_bits}")
        count = max(1, -(-self.length // symbol_bits)) if self.length else 0
        mask = (1 << symbol_bits) - 1
        return tuple((self.value >> (i * symbol_bits)) & mask for i in range(count))

    def to_bytes(self) -> bytes:
        return self.value.to_bytes((self.length + 7) // 8, "little")

    # ---- combinators ----

    def __xor__(self, other: "BitBlock") -> "BitBlock":
        if not isinstance(other, BitBlock):
            return NotImplemented
        if other.length != self.length:
            raise UsageError(
                f"xor of mismatched lengths {self.length} and {other.length}"
            )
        return BitBlock(self.value ^ other.value, self.length)

    def concat(self, other: "BitBlock") -> "BitBlock":
        return BitBlock(self.value | (other.value << self.length),
                        self.length + other.length)

    def pad_to(self, length: int) -> "BitBlock":
        if length < self.length:
            raise UsageError(f"cannot pad {self.length} bits down to {length}")
        return BitBlock(self.value, length)

    def truncate(self, length: int) -> "BitBlock":
        """Keep the first `length` bits, discarding the rest (zero padding)."""
        if length > self.length:
            raise UsageError(f"cannot truncate {self.length} bits up to {length}")
        return BitBlock(self.value & ((1 << length) - 1), length)

    def __repr__(self) -> str:  # keep failure output short
        return f"BitBlock({self.length}b:{self.value:x})"


def concat_blocks(blocks: "list[BitBlock] | tuple[BitBlock, ...]") -> BitBlock:
    value = 0
    offset = 0
    for b in blocks:
        value |= b.value << offset
        offset += b.length
    return BitBlock(value, offset)
