"""Bit-exact serialization: HADP pattern streams, CSV rows, PBM bitmaps."""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import SignVector
from .ordering import OrderingScheme

__all__ = [
    "MAGIC",
    "VERSION",
    "HEADER_SIZE",
    "PatternFormatError",
    "BadMagicError",
    "UnsupportedVersionError",
    "TruncatedStreamError",
    "PatternFileHeader",
    "write_patterns",
    "read_patterns",
    "export_row_text",
]

MAGIC = b"HADP"
VERSION = 1

# magic, version, order exponent, scheme code, row count, reserved
_HEADER = struct.Struct("<4sBBBQB")
HEADER_SIZE = _HEADER.size

_SCHEME_CODES = {
    OrderingScheme.NATURAL: 0,
    OrderingScheme.SEQUENCY: 1,
    OrderingScheme.DYADIC: 2,
}
_CODE_SCHEMES = {code: scheme for scheme, code in _SCHEME_CODES.items()}


class PatternFormatError(ValueError):
    """Structurally invalid pattern stream."""


class BadMagicError(PatternFormatError):
    """Stream does not start with the HADP magic."""


class UnsupportedVersionError(PatternFormatError):
    """Stream version this reader does not understand."""


class TruncatedStreamError(PatternFormatError):
    """Stream ends before the length its header promises."""


@dataclass(frozen=True)
class PatternFileHeader:
    n: int
    scheme: OrderingScheme
    count: int

    def row_bytes(self) -> int:
        return ((1 << self.n) + 7) // 8


def write_patterns(
    rows: Sequence[tuple[int, SignVector]], n: int, scheme: OrderingScheme
) -> bytes:
    """Serialize (ordered index, row) pairs, deterministic byte for byte.

    Layout: the fixed header, then count 8-byte little-endian indices in
    strictly increasing order, then the packed rows in the same order,
    each zero padded to a byte boundary.
    """
    scheme = OrderingScheme(scheme)
    if not 1 <= n <= 62:
        raise ValueError(f"order exponent must be in [1, 62], got {n}")
    length = 1 << n
    index_block = bytearray()
    payload = bytearray()
    previous = -1
    count = 0
    for index, row in rows:
        if len(row) != length:
            raise ValueError(f"row length {len(row)} does not match order 2^{n}")
        if not 0 <= index < length:
            raise ValueError(f"index {index} out of range [0, {length})")
        if index <= previous:
            raise ValueError(f"indices must be strictly increasing, got {index} after {previous}")
        previous = index
        index_block += index.to_bytes(8, "little")
        payload += row.packed
        count += 1
    header = _HEADER.pack(MAGIC, VERSION, n, _SCHEME_CODES[scheme], count, 0)
    return header + bytes(index_block) + bytes(payload)


def read_patterns(data: bytes) -> tuple[PatternFileHeader, list[tuple[int, SignVector]]]:
    """Exact inverse of write_patterns; trusts nothing outside the stream."""
    if len(data) >= 4 and data[:4] != MAGIC:
        raise BadMagicError(f"bad magic {data[:4]!r}")
    if len(data) < HEADER_SIZE:
        raise TruncatedStreamError(
            f"stream of {len(data)} bytes is shorter than the {HEADER_SIZE}-byte header"
        )
    _, version, n, scheme_code, count, reserved = _HEADER.unpack_from(data)
    if version != VERSION:
        raise UnsupportedVersionError(f"unsupported version {version}")
    if not 1 <= n <= 62:
        raise PatternFormatError(f"order exponent {n} out of range [1, 62]")
    if scheme_code not in _CODE_SCHEMES:
        raise PatternFormatError(f"unknown ordering scheme code {scheme_code}")
    if reserved != 0:
        raise PatternFormatError(f"reserved byte must be zero, got {reserved}")
    length = 1 << n
    if count > length:
        raise PatternFormatError(f"count {count} exceeds 2^{n} rows")
    row_bytes = (length + 7) // 8
    need = HEADER_SIZE + count * (8 + row_bytes)
    if len(data) < need:
        raise TruncatedStreamError(f"stream has {len(data)} bytes, header promises {need}")
    if len(data) > need:
        raise PatternFormatError(f"{len(data) - need} trailing bytes after payload")
    pos = HEADER_SIZE
    indices = [
        int.from_bytes(data[pos + 8 * t : pos + 8 * t + 8], "little") for t in range(count)
    ]
    previous = -1
    for index in indices:
        if index >= length or index <= previous:
            raise PatternFormatError("index block is not strictly increasing in range")
        previous = index
    pos += 8 * count
    rows = []
    for t, index in enumerate(indices):
        chunk = data[pos + t * row_bytes : pos + (t + 1) * row_bytes]
        try:
            rows.append((index, SignVector.from_packed(chunk, length)))
        except ValueError as exc:
            raise PatternFormatError(f"row {t}: {exc}") from None
    return PatternFileHeader(n, _CODE_SCHEMES[scheme_code], count), rows


def export_row_text(row: SignVector, fmt: str) -> str:
    """Render one row as `csv` (signed entries) or `pbm` (square P1 bitmap).

    PBM reshapes the row row-major into a 2^(n/2) square, mapping +1 to
    `0` (white) and -1 to `1` (black), so the all-plus row renders blank.
    """
    if fmt == "csv":
        return ",".join(str(v) for v in row.to_numpy().tolist()) + "\n"
    if fmt == "pbm":
        n = row.order
        if n % 2:
            raise ValueError(f"pbm needs an even order exponent for a square reshape, got n={n}")
        side = 1 << (n // 2)
        bits = (row.to_numpy() == -1).astype(np.uint8)
        lines = (
            "".join("1" if bit else "0" for bit in bits[r * side : (r + 1) * side].tolist())
            for r in range(side)
        )
        return f"P1\n{side} {side}\n" + "\n".join(lines) + "\n"
    raise ValueError(f"unknown export format {fmt!r}")
