"""Fast Walsh-Hadamard transform in natural (Sylvester) coefficient order."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Spectrum", "fwht", "ifwht"]


@dataclass(frozen=True)
class Spectrum:
    """Transform coefficients of a length-2^n signal, natural order."""

    coefficients: np.ndarray
    n: int

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if coeffs.ndim != 1 or coeffs.size != 1 << self.n:
            raise ValueError(f"spectrum needs exactly {1 << self.n} coefficients")


def _checked(x) -> np.ndarray:
    arr = np.asarray(x)
    if arr.ndim != 1 or arr.size == 0 or arr.size & (arr.size - 1):
        raise ValueError(f"transform length must be a power of two, got shape {arr.shape}")
    return arr


def fwht(x) -> Spectrum:
    """Multiply x by the order-2^n Hadamard matrix via the butterfly network.

    Coefficient i equals the inner product of natural-order row i with x,
    computed with n*2^n additions and subtractions.  Integer input is
    widened to 64 bits; float input is carried in float64.
    """
    arr = _checked(x)
    dtype = np.int64 if issubclass(arr.dtype.type, np.integer) else np.float64
    v = arr.astype(dtype)
    half = 1
    while half < v.size:
        pairs = v.reshape(-1, 2, half)
        v = np.stack(
            (pairs[:, 0, :] + pairs[:, 1, :], pairs[:, 0, :] - pairs[:, 1, :]),
            axis=1,
        ).reshape(-1)
        half *= 2
    return Spectrum(v, v.size.bit_length() - 1)


def ifwht(spectrum) -> np.ndarray:
    """Invert fwht using H H = 2^n I: transform again, divide by 2^n.

    Integer spectra that divide exactly come back as integers; otherwise
    the result falls back to float64.
    """
    coeffs = spectrum.coefficients if isinstance(spectrum, Spectrum) else _checked(spectrum)
    out = fwht(coeffs).coefficients
    size = out.size
    if issubclass(out.dtype.type, np.integer):
        quotient, remainder = np.divmod(out, size)
        if not remainder.any():
            return quotient
    return out / size
