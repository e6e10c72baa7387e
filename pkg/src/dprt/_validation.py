"""Input validation helpers shared by the transforms, simulators and CLI."""

import numpy as np

# int64 headroom; every datapath width must stay below this
MAX_WIDTH = 62


class InvalidRadonArray(ValueError):
    """Raised when an array cannot be the DPRT of any B-bit image."""


class WidthViolation(AssertionError):
    """A value does not fit the fixed bit width declared for it."""


def is_prime(n):
    """Deterministic trial-division primality test."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def ceil_log2(x):
    """Integer ceil(log2(x)) for x >= 1, with ceil_log2(1) == 0."""
    if x < 1:
        raise ValueError(f"ceil_log2 requires x >= 1, got {x}")
    return (int(x) - 1).bit_length()


def check_prime(n, name="N"):
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise TypeError(f"{name} must be an integer, got {type(n).__name__}")
    if not is_prime(int(n)):
        raise ValueError(f"{name} must be prime, got {n}")
    return int(n)


def check_bits(b):
    if not isinstance(b, (int, np.integer)) or isinstance(b, bool) or b < 1:
        raise ValueError(f"bits must be a positive integer, got {b!r}")
    return int(b)


def check_width(values, width, what="value"):
    """Assert every entry of `values` lies in [0, 2**width)."""
    arr = np.asarray(values)
    if arr.size == 0:
        return
    lo = arr.min()
    hi = arr.max()
    if lo < 0 or hi >= (1 << width):
        raise WidthViolation(
            f"{what} out of range for {width}-bit width: min={lo}, max={hi}"
        )


def as_integer_grid(a, shape=None, name="array"):
    """Return `a` as a C-contiguous int64 array, rejecting non-integral data."""
    arr = np.asarray(a)
    if arr.dtype == object:
        arr = arr.astype(np.int64)
    if arr.dtype.kind == "f":
        if not np.all(np.isfinite(arr)) or not np.all(arr == np.round(arr)):
            raise ValueError(f"{name} must contain integers")
    elif arr.dtype.kind not in "iub":
        raise ValueError(f"{name} must be an integer array, got dtype {arr.dtype}")
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    if shape is not None and arr.shape != tuple(shape):
        raise ValueError(f"{name} must have shape {tuple(shape)}, got {arr.shape}")
    return arr
