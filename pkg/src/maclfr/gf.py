"""Binary extension field arithmetic GF(2^l).

Elements are plain ints in [0, 2^l) holding polynomial-basis coordinates:
bit j of the int is the coefficient of x^j, so the constant term sits in
the least significant bit.  A BinaryField instance fixes the exponent and
the reduction polynomial and exposes arithmetic on raw ints; FieldElement
is a thin typed wrapper for callers that want mismatched-field detection.

Multiplication and inversion go through log/antilog tables built from a
generator of the multiplicative group, which is plenty for the exponents
used here (l <= 16).  Reduction polynomials are validated irreducible by
exhaustive trial division.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError, UsageError

MAX_EXPONENT = 16

# Canonical reduction polynomials for the small fields that appear in the
# schemes.  Larger exponents fall back to a search for the lexicographically
# first lowest-weight irreducible polynomial, which reproduces these entries.
_CANONICAL = {
    1: 0b10,        # x
    2: 0b111,       # x^2 + x + 1
    3: 0b1011,      # x^3 + x + 1
    4: 0b10011,     # x^4 + x + 1
}


# ---- polynomial helpers on raw masks ----

def _clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2)[x] masks."""
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        b >>= 1
    return acc


def _polymod(a: int, m: int) -> int:
    """Remainder of mask a modulo mask m over GF(2)."""
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm and a:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Exhaustive trial division; intended for degrees up to MAX_EXPONENT."""
    degree = poly.bit_length() - 1
    if degree < 1:
        return False
    if degree > MAX_EXPONENT:
        raise DomainError(f"irreducibility check limited to degree {MAX_EXPONENT}")
    for d in range(1, degree // 2 + 1):
        for divisor in range(1 << d, 1 << (d + 1)):
            if _polymod(poly, divisor) == 0:
                return False
    return True


@functools.lru_cache(maxsize=None)
def canonical_reduction_poly(exponent: int) -> int:
    """Lowest-weight, then lowest-value, irreducible polynomial of the degree."""
    if not 1 <= exponent <= MAX_EXPONENT:
        raise DomainError(f"exponent must be in [1, {MAX_EXPONENT}], got {exponent}")
    if exponent in _CANONICAL:
        return _CANONICAL[exponent]
    candidates = sorted(range(1 << exponent, 1 << (exponent + 1)),
                        key=lambda m: (bin(m).count("1"), m))
    for mask in candidates:
        if is_irreducible(mask):
            return mask
    raise DomainError(f"no irreducible polynomial of degree {exponent}")  # unreachable


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


class BinaryField:
    """GF(2^exponent) with a fixed reduction polynomial.

    The arithmetic methods take and return raw ints.  Use element() to get
    typed FieldElement values when field provenance should be checked.
    """

    def __init__(self, exponent: int, reduction_poly: int | None = None):
        if not 1 <= exponent <= MAX_EXPONENT:
            raise DomainError(
                f"exponent must be in [1, {MAX_EXPONENT}], got {exponent}")
        if reduction_poly is None:
            reduction_poly = canonical_reduction_poly(exponent)
        if reduction_poly.bit_length() - 1 != exponent:
            raise DomainError(
                f"reduction polynomial degree {reduction_poly.bit_length() - 1} "
                f"does not match exponent {exponent}")
        if not is_irreducible(reduction_poly):
            raise DomainError(f"reduction polynomial {reduction_poly:#b} is reducible")
        self.exponent = exponent
        self.reduction_poly = reduction_poly
        self.order = 1 << exponent
        self._build_tables()

    def _mul_slow(self, a: int, b: int) -> int:
        return _polymod(_clmul(a, b), self.reduction_poly)

    def _build_tables(self) -> None:
        group = self.order - 1
        gen = None
        factors = _prime_factors(group) if group > 1 else []
        for cand in range(1, self.order):
            if all(self._pow_slow(cand, group // p) != 1 for p in factors):
                gen = cand
                break
        assert gen is not None
        exp = [0] * group
        log = [0] * self.order
        acc = 1
        for i in range(group):
            exp[i] = acc
            log[acc] = i
            acc = self._mul_slow(acc, gen)
        assert acc == 1, "generator order mismatch"
        self._exp = exp
        self._log = log

    def _pow_slow(self, a: int, e: int) -> int:
        acc = 1
        while e:
            if e & 1:
                acc = self._mul_slow(acc, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return acc

    # ---- raw int arithmetic ----

    def _check(self, a: int) -> int:
        if not 0 <= a < self.order:
            raise DomainError(f"value {a} outside field of order {self.order}")
        return a

    def add(self, a: int, b: int) -> int:
        return self._check(a) ^ self._check(b)

    def mul(self, a: int, b: int) -> int:
        self._check(a), self._check(b)
        if a == 0 or b == 0:
            return 0
        group = self.order - 1
        return self._exp[(self._log[a] + self._log[b]) % group]

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise DomainError("zero has no multiplicative inverse")
        if self.order == 2:
            return 1
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def poly_eval(self, coeffs: Sequence[int], x: int) -> int:
        """Evaluate coeffs[0] + coeffs[1] x + ... by Horner's rule."""
        self._check(x)
        acc = 0
        for c in reversed(coeffs):
            acc = self.mul(acc, x) ^ self._check(c)
        return acc

    def interpolate_constant(self, points: Sequence[tuple[int, int]]) -> int:
        """Constant term of the unique degree < len(points) polynomial.

        Lagrange evaluation at zero.  The abscissas must be distinct and
        nonzero; zero would make the polynomial's own constant term one of
        the inputs, which no caller here wants.
        """
        xs = [self._check(x) for x, _ in points]
        if len(set(xs)) != len(xs):
            raise DomainError("duplicate interpolation abscissas")
        if any(x == 0 for x in xs):
            raise DomainError("interpolation abscissas must be nonzero")
        acc = 0
        for i, (xi, yi) in enumerate(points):
            self._check(yi)
            weight = 1
            for j, xj in enumerate(xs):
                if j != i:
                    weight = self.mul(weight, self.div(xj, xj ^ xi))
            acc ^= self.mul(yi, weight)
        return acc

    # ---- typed wrappers ----

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self._check(value), self)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def elements(self) -> Iterable["FieldElement"]:
        return (FieldElement(v, self) for v in range(self.order))

    def nonzero_elements(self) -> Iterable["FieldElement"]:
        return (FieldElement(v, self) for v in range(1, self.order))

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, BinaryField)
                and other.exponent == self.exponent
                and other.reduction_poly == self.reduction_poly)

    def __hash__(self) -> int:
        return hash((self.exponent, self.reduction_poly))

    def __repr__(self) -> str:
        return f"BinaryField(2^{self.exponent}, poly={self.reduction_poly:#b})"


@functools.lru_cache(maxsize=None)
def binary_field(exponent: int) -> BinaryField:
    """Shared instance of GF(2^exponent) with the canonical reduction poly."""
    return BinaryField(exponent)


def exponent_for_share_count(share_count: int) -> int:
    """Smallest l with share_count < 2^l, so that l-bit symbols admit
    share_count distinct nonzero evaluation points."""
    if share_count < 1:
        raise DomainError(f"share count must be positive, got {share_count}")
    return share_count.bit_length()


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: BinaryField

    def _peer(self, other: "FieldElement") -> "FieldElement":
        if not isinstance(other, FieldElement):
            raise UsageError(f"expected FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise UsageError(f"field mismatch: {self.field} vs {other.field}")
        return other

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.value ^ self._peer(other).value, self.field)

    __sub__ = __add__  # characteristic 2

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field.mul(self.value, self._peer(other).value),
                            self.field)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.field.div(self.value, self._peer(other).value),
                            self.field)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv(self.value), self.field)

    def __bool__(self) -> bool:
        return self.value != 0


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def poly_eval(coeffs: Sequence[FieldElement], x: FieldElement) -> FieldElement:
    for c in coeffs:
        x._peer(c)
    return FieldElement(x.field.poly_eval([c.value for c in coeffs], x.value),
                        x.field)


def interpolate_constant(points: Sequence[tuple[FieldElement, FieldElement]]
                         ) -> FieldElement:
    if not points:
        raise DomainError("no interpolation points")
    field = points[0][0].field
    for x, y in points:
        points[0][0]._peer(x), points[0][0]._peer(y)
    return FieldElement(
        field.interpolate_constant([(x.value, y.value) for x, y in points]), field)
