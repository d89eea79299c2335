"""On-demand construction of single Hadamard matrix rows.

The order-2^n Sylvester Hadamard matrix is the n-fold Kronecker power of
the 2x2 base matrix, so row i is the Kronecker product of n base rows
selected by the binary digits of i.  Building one row this way touches
O(2^n) memory, never the O(4^n) of the full matrix, which is what makes
streaming patterns at large orders practical.

Everything here is exact sign arithmetic over {+1, -1}; no floating
point.  Two independent oracles (`full_matrix` and `direct_row`) exist
purely to cross-check `generate_row` and each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ORDER_CAP",
    "INDEX_BITS_CAP",
    "FULL_MATRIX_CAP",
    "OrderError",
    "IndexRangeError",
    "SignVector",
    "BitString",
    "BaseMatrix",
    "BASE_MATRIX",
    "OpCounter",
    "dec2bin",
    "kron",
    "generate_row",
    "direct_row",
    "full_matrix",
    "predicted_cost",
]

# 2^30 entries is 128 MiB packed; beyond that callers should shard.
ORDER_CAP = 30
# Row indices fit an unsigned 62-bit value.
INDEX_BITS_CAP = 62
# The full-matrix oracle is memory-quadratic by design.
FULL_MATRIX_CAP = 13


class OrderError(ValueError):
    """Order exponent outside the supported range."""


class IndexRangeError(ValueError):
    """Row index outside [0, 2^n)."""


def _check_order(n: int, cap: int) -> None:
    if not 1 <= n <= cap:
        raise OrderError(f"order exponent must be in [1, {cap}], got {n}")


def _check_index(i: int, n: int) -> None:
    if not 0 <= i < (1 << n):
        raise IndexRangeError(f"row index {i} out of range [0, {1 << n})")


@dataclass(frozen=True)
class SignVector:
    """Immutable length-2^k vector over {+1, -1}, stored one bit per entry.

    Bit 0 encodes +1 and bit 1 encodes -1, most significant bit of each
    byte first, with the final byte zero padded.  Under this encoding the
    all-plus row packs to all-zero bytes and the popcount of the packed
    storage counts the -1 entries.
    """

    packed: bytes
    length: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "packed", bytes(self.packed))
        if self.length < 1 or self.length & (self.length - 1):
            raise ValueError(f"length must be a power of two, got {self.length}")
        expected = (self.length + 7) // 8
        if len(self.packed) != expected:
            raise ValueError(
                f"packed storage must be {expected} bytes for length "
                f"{self.length}, got {len(self.packed)}"
            )
        pad = 8 * expected - self.length
        if pad and self.packed[-1] & ((1 << pad) - 1):
            raise ValueError("padding bits in the final byte must be zero")

    @classmethod
    def from_signs(cls, values) -> "SignVector":
        """Pack a sequence of +1/-1 entries."""
        arr = np.asarray(values)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("sign vector must be a non-empty 1-d sequence")
        if arr.size & (arr.size - 1):
            raise ValueError(f"sign vector length must be a power of two, got {arr.size}")
        if not np.all((arr == 1) | (arr == -1)):
            raise ValueError("sign vector entries must be +1 or -1")
        return cls._pack(arr.astype(np.int8))

    @classmethod
    def from_packed(cls, data, length: int) -> "SignVector":
        """Rehydrate from packed storage produced by `.packed`."""
        return cls(bytes(data), length)

    @classmethod
    def _pack(cls, signs: np.ndarray) -> "SignVector":
        # Trusted path: caller guarantees a 1-d +-1 array of power-of-two size.
        return cls(np.packbits(signs == -1).tobytes(), signs.size)

    def __len__(self) -> int:
        return self.length

    @property
    def order(self) -> int:
        """Exponent k with len(self) == 2^k."""
        return self.length.bit_length() - 1

    def __getitem__(self, index: int) -> int:
        if index < 0:
            index += self.length
        if not 0 <= index < self.length:
            raise IndexError(f"entry {index} out of range for length {self.length}")
        bit = (self.packed[index >> 3] >> (7 - (index & 7))) & 1
        return 1 - 2 * bit

    def __iter__(self):
        return iter(self.to_numpy().tolist())

    def to_numpy(self) -> np.ndarray:
        """Unpack to a fresh int8 array of +1/-1 entries."""
        bits = np.unpackbits(np.frombuffer(self.packed, dtype=np.uint8), count=self.length)
        return 1 - 2 * bits.astype(np.int8)

    def dot(self, other: "SignVector") -> int:
        """Exact inner product; 2^n on self, 0 against any orthogonal row."""
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")
        diff = int.from_bytes(self.packed, "big") ^ int.from_bytes(other.packed, "big")
        return self.length - 2 * diff.bit_count()

    def negated(self) -> "SignVector":
        """Entrywise negation, still bit-packed with clean padding."""
        nbytes = len(self.packed)
        full = (1 << (8 * nbytes)) - 1
        pad_mask = (1 << (8 * nbytes - self.length)) - 1
        flipped = (int.from_bytes(self.packed, "big") ^ full) & full & ~pad_mask
        return SignVector(flipped.to_bytes(nbytes, "big"), self.length)

    def negative_count(self) -> int:
        """Number of -1 entries (popcount of the packed bytes)."""
        return int.from_bytes(self.packed, "big").bit_count()

    def __repr__(self) -> str:
        if self.length <= 16:
            body = ",".join(str(v) for v in self)
            return f"SignVector([{body}])"
        return f"SignVector(length={self.length})"


@dataclass(frozen=True)
class BitString:
    """Fixed-width binary expansion of a row index, most significant digit first."""

    digits: tuple[int, ...]
    source_index: int
    width: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "digits", tuple(self.digits))
        if self.width != len(self.digits):
            raise ValueError(f"width {self.width} does not match {len(self.digits)} digits")
        if any(d not in (0, 1) for d in self.digits):
            raise ValueError("digits must all be 0 or 1")
        if self.to_index() != self.source_index:
            raise ValueError(
                f"digits {self.digits} encode {self.to_index()}, not {self.source_index}"
            )

    def to_index(self) -> int:
        """Fold the digits back into the integer they encode."""
        value = 0
        for digit in self.digits:
            value = (value << 1) | digit
        return value


def dec2bin(i: int, n: int) -> BitString:
    """n-digit binary expansion of row index i, most significant digit first."""
    _check_order(n, INDEX_BITS_CAP)
    _check_index(i, n)
    return BitString(tuple((i >> (n - 1 - k)) & 1 for k in range(n)), i, n)


@dataclass(frozen=True)
class BaseMatrix:
    """Order-two seed matrix: row 0 is (+1, +1), row 1 is (+1, -1)."""

    row0: SignVector
    row1: SignVector

    def row(self, digit: int) -> SignVector:
        if digit == 0:
            return self.row0
        if digit == 1:
            return self.row1
        raise ValueError(f"base row selector must be 0 or 1, got {digit}")


BASE_MATRIX = BaseMatrix(SignVector.from_signs([1, 1]), SignVector.from_signs([1, -1]))

_BASE_SIGNS = (
    np.array([1, 1], dtype=np.int8),
    np.array([1, -1], dtype=np.int8),
)


@dataclass
class OpCounter:
    """Tally of scalar sign multiplications charged during one generation call."""

    multiplications: int = 0

    def add(self, count: int) -> None:
        if count < 0:
            raise ValueError("cannot charge a negative multiplication count")
        self.multiplications += count


def _kron_signs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a[:, None] * b[None, :]).reshape(-1)


def kron(a: SignVector, b: SignVector, counter: OpCounter | None = None) -> SignVector:
    """Kronecker product: entry p*len(b)+q of the result is a[p] * b[q].

    Charges len(a)*len(b) multiplications to `counter`, the cost of the
    defining double loop, independent of how the product is realized
    internally.
    """
    out_len = len(a) * len(b)
    if out_len > (1 << ORDER_CAP):
        raise OrderError(f"kron result length {out_len} exceeds the 2^{ORDER_CAP} cap")
    if counter is not None:
        counter.add(len(a) * len(b))
    return SignVector._pack(_kron_signs(a.to_numpy(), b.to_numpy()))


def generate_row(i: int, n: int) -> tuple[SignVector, OpCounter]:
    """Row i of the order-2^n Hadamard matrix, without building the matrix.

    The binary digits of i, most significant first, pick which base row
    enters each Kronecker factor, and the row accumulates left to right.
    The returned counter always reads 2^(n+1) - 2; peak working memory is
    the final row plus one half-size partial product.
    """
    _check_order(n, ORDER_CAP)
    _check_index(i, n)
    counter = OpCounter()
    acc = np.ones(1, dtype=np.int8)
    for digit in dec2bin(i, n).digits:
        counter.add(2 * acc.size)
        acc = _kron_signs(acc, _BASE_SIGNS[digit])
    return SignVector._pack(acc), counter


# Chunk size for the closed-form oracle: bounds extra memory to O(1)
# beyond the output regardless of row length.
_DIRECT_CHUNK = 1 << 20


def direct_row(i: int, n: int) -> SignVector:
    """Same row as generate_row, via the closed form (-1)^popcount(i AND j).

    Each entry is evaluated independently from the index bits, sharing no
    code path with the Kronecker accumulation, so the two implementations
    can serve as oracles for each other.
    """
    _check_order(n, ORDER_CAP)
    _check_index(i, n)
    size = 1 << n
    out = np.empty(size, dtype=np.int8)
    mask = np.uint64(i)
    for start in range(0, size, _DIRECT_CHUNK):
        stop = min(start + _DIRECT_CHUNK, size)
        j = np.arange(start, stop, dtype=np.uint64)
        parity = (np.bitwise_count(j & mask) & 1).astype(np.int8)
        out[start:stop] = 1 - 2 * parity
    return SignVector._pack(out)


def full_matrix(n: int) -> list[SignVector]:
    """All 2^n rows via the doubling recursion [[H, H], [H, -H]].

    Memory-quadratic by construction and capped at desk scale: it exists
    only to cross-check the row generator, never for production use.
    """
    if n > FULL_MATRIX_CAP:
        raise OrderError(f"full-matrix oracle is capped at n <= {FULL_MATRIX_CAP}, got {n}")
    _check_order(n, FULL_MATRIX_CAP)
    h = np.ones((1, 1), dtype=np.int8)
    for _ in range(n):
        h = np.block([[h, h], [h, -h]])
    packed = np.packbits(h == -1, axis=1)
    size = 1 << n
    return [SignVector(packed[r].tobytes(), size) for r in range(size)]


def predicted_cost(n: int) -> int:
    """Exact number of scalar multiplications one row generation performs."""
    _check_order(n, INDEX_BITS_CAP)
    return (1 << (n + 1)) - 2
