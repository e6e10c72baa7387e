"""Exact forward and inverse discrete periodic Radon transform (DPRT).

An N x N image ``f`` (N prime, B-bit pixels) maps to an (N+1) x N array::

    R(m, d) = sum_i f(i, <d + m*i>_N)      for 0 <= m < N
    R(N, d) = sum_j f(d, j)

and is recovered exactly by::

    f(i, j) = ( sum_{m<N} R(m, <j - m*i>_N) - S + R(N, i) ) / N

where ``S`` is the sum of all pixels (equal to the sum of any one row of R).
All arithmetic is integer; every public array is checked against its declared
bit width.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import (
    MAX_WIDTH,
    InvalidRadonArray,
    as_integer_grid,
    ceil_log2,
    check_bits,
    check_prime,
    check_width,
)

__all__ = [
    "Image",
    "RadonArray",
    "InvalidRadonArray",
    "mod_index",
    "forward_dprt",
    "inverse_dprt",
    "total_sum",
    "output_width",
    "normalize_backprojection",
]


def mod_index(a, b):
    """Positive remainder of ``a`` divided by ``b``, always in ``[0, b)``."""
    if b <= 0:
        raise ValueError(f"modulus must be positive, got {b}")
    return a % b


def output_width(n, b):
    """Bits needed to hold a DPRT coefficient of an ``n`` x ``n``, ``b``-bit image."""
    return b + ceil_log2(n)


def _readonly(arr):
    arr = np.array(arr, dtype=np.int64, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Image:
    """Square prime-sized image of non-negative ``bits``-bit integers.

    ``pixels[i, j]`` is f(i, j): row ``i``, column ``j``.
    """

    pixels: np.ndarray
    bits: int

    def __post_init__(self):
        px = as_integer_grid(self.pixels, name="pixels")
        if px.ndim != 2 or px.shape[0] != px.shape[1]:
            raise ValueError(f"image must be square, got shape {px.shape}")
        check_prime(px.shape[0], "N")
        bits = check_bits(self.bits)
        if bits > MAX_WIDTH - 2 * ceil_log2(px.shape[0]) - 2:
            raise ValueError(f"bits={bits} too wide for exact int64 evaluation")
        if px.size and (px.min() < 0 or px.max() >= (1 << bits)):
            raise ValueError(f"pixel values must lie in [0, 2**{bits})")
        object.__setattr__(self, "pixels", _readonly(px))
        object.__setattr__(self, "bits", bits)

    @property
    def n(self):
        return self.pixels.shape[0]

    @classmethod
    def from_array(cls, pixels, bits=None):
        """Wrap ``pixels``; ``bits`` defaults to the narrowest width holding the max."""
        px = as_integer_grid(pixels, name="pixels")
        if bits is None:
            top = int(px.max()) if px.size else 0
            bits = max(1, ceil_log2(top + 1))
        return cls(px, bits)

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.bits == other.bits and np.array_equal(self.pixels, other.pixels)

    def __repr__(self):
        return f"Image(n={self.n}, bits={self.bits})"


@dataclass(frozen=True, eq=False)
class RadonArray:
    """DPRT coefficients ``values[m, d]`` = R(m, d), shape (N+1, N).

    ``bits_in`` is the pixel width B of the source image; coefficients are
    bounded by ``N * (2**B - 1)`` and fit in ``B + ceil(log2 N)`` bits.
    """

    values: np.ndarray
    bits_in: int

    def __post_init__(self):
        vals = as_integer_grid(self.values, name="values")
        if vals.ndim != 2 or vals.shape[0] != vals.shape[1] + 1:
            raise ValueError(f"Radon array must have shape (N+1, N), got {vals.shape}")
        n = check_prime(vals.shape[1], "N")
        bits = check_bits(self.bits_in)
        if bits > MAX_WIDTH - 2 * ceil_log2(n) - 2:
            raise ValueError(f"bits_in={bits} too wide for exact int64 evaluation")
        bound = n * ((1 << bits) - 1)
        if vals.min() < 0 or vals.max() > bound:
            raise InvalidRadonArray(f"Radon coefficients must lie in [0, {bound}]")
        object.__setattr__(self, "values", _readonly(vals))
        object.__setattr__(self, "bits_in", bits)

    @property
    def n(self):
        return self.values.shape[1]

    @property
    def width(self):
        return output_width(self.n, self.bits_in)

    def __eq__(self, other):
        if not isinstance(other, RadonArray):
            return NotImplemented
        return self.bits_in == other.bits_in and np.array_equal(self.values, other.values)

    def __repr__(self):
        return f"RadonArray(n={self.n}, bits_in={self.bits_in})"


def forward_dprt(img):
    """Forward DPRT of an :class:`Image`."""
    f = img.pixels
    n = img.n
    rows = np.arange(n)
    out = np.empty((n + 1, n), dtype=np.int64)
    for m in range(n):
        cols = (rows[None, :] + m * rows[:, None]) % n  # [i, d] -> <d + m i>
        out[m] = f[rows[:, None], cols].sum(axis=0)
    out[n] = f.sum(axis=1)
    check_width(out, output_width(n, img.bits), "DPRT coefficient")
    return RadonArray(out, img.bits)


def total_sum(r, m):
    """Sum of projection ``m`` of ``r``; for a valid DPRT this is the pixel total."""
    if not 0 <= m <= r.n:
        raise ValueError(f"direction index must be in [0, {r.n}], got {m}")
    return int(r.values[m].sum())


def backprojection_sum(r):
    """``Z[i, j] = sum_{m<N} R(m, <j - m i>_N)`` (without the R(N, i) term)."""
    n = r.n
    vals = r.values
    idx = np.arange(n)
    z = np.zeros((n, n), dtype=np.int64)
    for m in range(n):
        z += vals[m][(idx[None, :] - m * idx[:, None]) % n]
    return z


def normalize_backprojection(z, r):
    """Finish the inverse from summed back-projections ``z``.

    Adds R(N, i), subtracts the total sum and divides by N, raising
    :class:`InvalidRadonArray` if the numerator is negative, not divisible by
    N, or yields pixels wider than ``r.bits_in``.
    """
    n = r.n
    s = total_sum(r, 0)
    num = np.asarray(z, dtype=np.int64) + r.values[n][:, None] - s
    if num.min() < 0:
        raise InvalidRadonArray("negative numerator: input is not the DPRT of any image")
    q, rem = np.divmod(num, n)
    if np.any(rem):
        raise InvalidRadonArray("numerator not divisible by N: input is not a valid DPRT")
    if q.max() >= (1 << r.bits_in):
        raise InvalidRadonArray(f"reconstructed pixels exceed {r.bits_in} bits")
    return Image(q, r.bits_in)


def inverse_dprt(r):
    """Exact inverse DPRT; validates rather than trusts ``r``."""
    return normalize_backprojection(backprojection_sum(r), r)
