"""scikit-learn style transformer wrapping the forward and inverse DPRT."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_integer_grid, ceil_log2, check_prime, is_prime
from .core import Image, RadonArray, forward_dprt, inverse_dprt
from .sim import run_fdprt, run_ifdprt, run_isfdprt, run_sfdprt
from .strips import strip_dprt, strip_idprt

METHODS = ("direct", "strips", "simulated")


def _side_from_flat(width):
    n = int(round(width**0.5))
    if n * n != width or not is_prime(n):
        raise ValueError(f"{width} features is not N*N for a prime N")
    return n


class DPRTTransformer(TransformerMixin, BaseEstimator):
    """Forward DPRT of a batch of prime-sized images.

    ``X`` is either ``(n_samples, N, N)`` or flattened ``(n_samples, N*N)``;
    :meth:`transform` returns ``(n_samples, N+1, N)`` (or flattened
    ``(n_samples, (N+1)*N)`` when ``X`` was flat). Everything stays integer.

    Parameters
    ----------
    method : {"direct", "strips", "simulated"}
        Reference formula, strip decomposition, or the cycle-level
        hardware model (SFDPRT/iSFDPRT with ``strip_height``, otherwise
        FDPRT/iFDPRT).
    strip_height : int or None
        Strip height ``H``; ``None`` means one full-height strip.
    bits : int or None
        Pixel width ``B``; inferred from the largest training pixel if None.
    """

    def __init__(self, method="direct", strip_height=None, bits=None):
        self.method = method
        self.strip_height = strip_height
        self.bits = bits

    def _images(self, X, reset):
        arr = as_integer_grid(X, name="X")
        if arr.ndim == 2:
            n = _side_from_flat(arr.shape[1])
            arr = arr.reshape(len(arr), n, n)
            flat = True
        elif arr.ndim == 3:
            if arr.shape[1] != arr.shape[2]:
                raise ValueError(f"images must be square, got {arr.shape[1:]}")
            n = check_prime(arr.shape[1])
            flat = False
        else:
            raise ValueError(f"X must be 2-D or 3-D, got {arr.ndim}-D")
        if len(arr) == 0:
            raise ValueError("X holds no samples")
        if reset:
            self.n_ = n
            if self.bits is None:
                top = int(arr.max()) if arr.size else 0
                self.bits_ = max(1, ceil_log2(top + 1))
            else:
                self.bits_ = int(self.bits)
            self.n_features_in_ = n * n
        elif n != self.n_:
            raise ValueError(f"fitted for N={self.n_}, got N={n}")
        return arr, flat

    def _check_params(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        h = self.strip_height
        if h is not None and not 2 <= h <= self.n_:
            raise ValueError(f"strip_height must satisfy 2 <= H <= {self.n_}, got {h}")

    def fit(self, X, y=None):
        self._images(X, reset=True)
        self._check_params()
        return self

    def _forward(self, img):
        h = self.strip_height
        if self.method == "direct":
            return forward_dprt(img)
        if self.method == "strips":
            return strip_dprt(img, h or img.n)
        return (run_sfdprt(img, h) if h else run_fdprt(img))[0]

    def _inverse(self, r):
        h = self.strip_height
        if self.method == "direct":
            return inverse_dprt(r)
        if self.method == "strips":
            return strip_idprt(r, h or r.n)
        return (run_isfdprt(r, h) if h else run_ifdprt(r))[0]

    def transform(self, X):
        check_is_fitted(self, "n_")
        self._check_params()
        arr, flat = self._images(X, reset=False)
        out = np.stack([self._forward(Image(a, self.bits_)).values for a in arr])
        return out.reshape(len(arr), -1) if flat else out

    def inverse_transform(self, X):
        check_is_fitted(self, "n_")
        self._check_params()
        n = self.n_
        arr = as_integer_grid(X, name="X")
        flat = arr.ndim == 2
        if flat:
            if arr.shape[1] != (n + 1) * n:
                raise ValueError(f"expected {(n + 1) * n} features, got {arr.shape[1]}")
            arr = arr.reshape(len(arr), n + 1, n)
        elif arr.ndim != 3 or arr.shape[1:] != (n + 1, n):
            raise ValueError(f"expected arrays of shape (n_samples, {n + 1}, {n})")
        out = np.stack([self._inverse(RadonArray(a, self.bits_)).pixels for a in arr])
        return out.reshape(len(arr), -1) if flat else out
