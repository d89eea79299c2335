"""Single-pixel imaging simulation: stream one pattern row at a time.

A single-pixel detector measuring through Hadamard patterns records one
inner product per pattern.  `simulate` reproduces that stream exactly
(noiseless, signed +-1 patterns) and `reconstruct` inverts the measured
coefficients with the fast transform, zero-filling whatever was not
measured.  Scenes travel as portable graymaps (P2 or P5).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import _check_index
from .ordering import OrderingScheme, generate_ordered_row, to_natural
from .transform import Spectrum, ifwht

__all__ = [
    "MAX_PIXEL",
    "DuplicateIndexError",
    "PgmError",
    "Scene",
    "MeasurementSet",
    "simulate",
    "reconstruct",
    "read_pgm",
    "write_pgm",
]

MAX_PIXEL = 65535


class DuplicateIndexError(ValueError):
    """The same ordered index appears twice in a measurement set."""


class PgmError(ValueError):
    """Malformed portable graymap stream."""


def _is_pow2(value: int) -> bool:
    return value >= 1 and value & (value - 1) == 0


@dataclass(frozen=True)
class Scene:
    """Row-major nonnegative integer image with power-of-two dimensions."""

    pixels: np.ndarray
    width: int
    height: int

    def __post_init__(self) -> None:
        arr = np.asarray(self.pixels, dtype=np.int64).reshape(-1)
        object.__setattr__(self, "pixels", arr)
        if not (_is_pow2(self.width) and _is_pow2(self.height)):
            raise ValueError(
                f"scene dimensions must be powers of two, got {self.width}x{self.height}"
            )
        if arr.size != self.width * self.height:
            raise ValueError(f"expected {self.width * self.height} pixels, got {arr.size}")
        if int(arr.min()) < 0 or int(arr.max()) > MAX_PIXEL:
            raise ValueError(f"pixel values must lie in [0, {MAX_PIXEL}]")

    @property
    def n(self) -> int:
        """Order exponent: width * height == 2^n."""
        return (self.width * self.height).bit_length() - 1

    def reshaped(self) -> np.ndarray:
        """Pixels as a (height, width) array."""
        return self.pixels.reshape(self.height, self.width)


@dataclass(frozen=True)
class MeasurementSet:
    """Detector readings: (ordered index, inner product) pairs plus context."""

    entries: tuple[tuple[int, int], ...]
    scheme: OrderingScheme
    n: int
    width: int
    height: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple((int(k), int(y)) for k, y in self.entries))
        object.__setattr__(self, "scheme", OrderingScheme(self.scheme))
        if self.width * self.height != 1 << self.n:
            raise ValueError(
                f"width*height must equal 2^{self.n}, got {self.width}x{self.height}"
            )
        seen = set()
        for k, _ in self.entries:
            _check_index(k, self.n)
            if k in seen:
                raise DuplicateIndexError(f"ordered index {k} measured twice")
            seen.add(k)

    def indices(self) -> list[int]:
        return [k for k, _ in self.entries]


def simulate(scene: Scene, indices, scheme=OrderingScheme.NATURAL) -> MeasurementSet:
    """Measure `scene` at the given ordered indices, one streamed row each.

    y_k is the inner product of ordered row k with the flattened scene.
    Rows are generated and discarded one at a time, so peak memory stays
    at one row plus the scene no matter how many indices are requested.
    """
    scheme = OrderingScheme(scheme)
    entries = []
    for k in indices:
        row = generate_ordered_row(int(k), scene.n, scheme)
        value = int(row.to_numpy().astype(np.int64) @ scene.pixels)
        entries.append((int(k), value))
    return MeasurementSet(tuple(entries), scheme, scene.n, scene.width, scene.height)


def reconstruct(measurements: MeasurementSet) -> np.ndarray:
    """Zero-filled inverse-transform estimate of the measured scene.

    Measured values land at their natural-order coefficient slots and the
    missing coefficients stay zero.  A full index set recovers the scene
    exactly (integer dtype); partial sets give the linear estimate, which
    falls back to float64 when 2^n no longer divides evenly.  The result
    has shape (height, width).
    """
    coeffs = np.zeros(1 << measurements.n, dtype=np.int64)
    for k, y in measurements.entries:
        coeffs[to_natural(k, measurements.n, measurements.scheme)] = y
    flat = ifwht(Spectrum(coeffs, measurements.n))
    return flat.reshape(measurements.height, measurements.width)


def _pgm_tokens(data: bytes, start: int, count: int) -> tuple[list[bytes], int]:
    """Scan whitespace-separated header tokens, skipping # comments."""
    tokens: list[bytes] = []
    pos = start
    while len(tokens) < count:
        while pos < len(data):
            char = data[pos : pos + 1]
            if char.isspace():
                pos += 1
            elif char == b"#":
                newline = data.find(b"\n", pos)
                pos = len(data) if newline < 0 else newline + 1
            else:
                break
        if pos >= len(data):
            raise PgmError("truncated graymap header")
        end = pos
        while end < len(data) and not data[end : end + 1].isspace():
            end += 1
        tokens.append(data[pos:end])
        pos = end
    return tokens, pos


def read_pgm(data: bytes) -> Scene:
    """Parse a P2 (text) or P5 (binary) graymap into a Scene.

    Raises PgmError for malformed streams; dimension violations (sides
    not powers of two) surface as the Scene's own ValueError.
    """
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PgmError(f"not a P2/P5 graymap (magic {magic!r})")
    tokens, pos = _pgm_tokens(data, 2, 3)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise PgmError("non-numeric graymap header field") from None
    if width < 1 or height < 1:
        raise PgmError(f"graymap dimensions must be positive, got {width}x{height}")
    if not 0 < maxval <= MAX_PIXEL:
        raise PgmError(f"maxval must be in [1, {MAX_PIXEL}], got {maxval}")
    count = width * height
    if magic == b"P5":
        if pos >= len(data) or not data[pos : pos + 1].isspace():
            raise PgmError("missing raster separator after maxval")
        pos += 1
        bytes_per = 2 if maxval > 255 else 1
        raster = data[pos : pos + count * bytes_per]
        if len(raster) < count * bytes_per:
            raise PgmError("truncated graymap raster")
        dtype = ">u2" if bytes_per == 2 else np.uint8
        values = np.frombuffer(raster, dtype=dtype).astype(np.int64)
    else:
        sample_tokens, _ = _pgm_tokens(data, pos, count)
        try:
            values = np.array([int(t) for t in sample_tokens], dtype=np.int64)
        except ValueError:
            raise PgmError("non-numeric sample in text graymap") from None
    if int(values.max(initial=0)) > maxval:
        raise PgmError("sample exceeds declared maxval")
    return Scene(values, width, height)


def write_pgm(image, maxval: int | None = None, binary: bool = True) -> bytes:
    """Encode a Scene or (height, width) array as P5 (binary) or P2 (text)."""
    if isinstance(image, Scene):
        arr = image.reshaped()
    else:
        arr = np.asarray(image)
        if arr.ndim != 2:
            raise ValueError("image must be a Scene or a 2-d array")
    arr = arr.astype(np.int64)
    if int(arr.min(initial=0)) < 0:
        raise ValueError("pixels must be nonnegative")
    if maxval is None:
        maxval = 255 if int(arr.max(initial=0)) <= 255 else MAX_PIXEL
    if not 0 < maxval <= MAX_PIXEL:
        raise ValueError(f"maxval must be in [1, {MAX_PIXEL}], got {maxval}")
    if int(arr.max(initial=0)) > maxval:
        raise ValueError("pixel exceeds maxval")
    height, width = arr.shape
    header = f"{'P5' if binary else 'P2'}\n{width} {height}\n{maxval}\n".encode("ascii")
    if binary:
        dtype = ">u2" if maxval > 255 else np.uint8
        return header + arr.astype(dtype).tobytes()
    body = "\n".join(" ".join(str(v) for v in row) for row in arr.tolist())
    return header + body.encode("ascii") + b"\n"
