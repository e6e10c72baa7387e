"""Strip decomposition of the forward and inverse DPRT.

The image (or the first N rows of a Radon array) is cut into ``K = ceil(N/H)``
strips of ``H`` consecutive rows; the last strip holds the ``N - (K-1)H``
remaining rows. Each strip yields a partial transform and the full transform
is the plain sum of the partials, which is what lets a fixed-size datapath
process arbitrarily large images.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import ceil_log2, check_prime, check_width
from .core import RadonArray, normalize_backprojection, output_width

__all__ = [
    "StripPlan",
    "PartialRadon",
    "PartialInverse",
    "make_strip_plan",
    "partial_dprt",
    "accumulate_partials",
    "partial_idprt",
    "combine_partial_idprt",
]


@dataclass(frozen=True)
class StripPlan:
    n: int
    h: int
    k: int
    lengths: tuple
    h_lat: int

    def rows(self, r):
        """Absolute row indices covered by strip ``r``."""
        self._check_strip(r)
        start = r * self.h
        return range(start, start + self.lengths[r])

    def _check_strip(self, r):
        if not 0 <= r < self.k:
            raise ValueError(f"strip index must be in [0, {self.k}), got {r}")


def make_strip_plan(n, h):
    """Plan ``K = ceil(n/h)`` strips of height ``h`` over ``n`` rows.

    ``h == n`` is allowed and gives a single full strip.
    """
    n = check_prime(n)
    if not isinstance(h, (int, np.integer)) or not 2 <= h <= n:
        raise ValueError(f"strip height must satisfy 2 <= H <= N={n}, got {h}")
    h = int(h)
    k = -(-n // h)
    lengths = (h,) * (k - 1) + (n - (k - 1) * h,)
    return StripPlan(n=n, h=h, k=k, lengths=lengths, h_lat=ceil_log2(h))


@dataclass(frozen=True, eq=False)
class PartialRadon:
    """Contribution R'(r, m, d) of strip ``r`` to every DPRT coefficient."""

    r: int
    plan: StripPlan
    values: np.ndarray
    bits: int


@dataclass(frozen=True, eq=False)
class PartialInverse:
    """Partial back-projection f'(r, i, j) of projection strip ``r``."""

    r: int
    plan: StripPlan
    values: np.ndarray


def _check_plan(plan, n):
    if plan.n != n:
        raise ValueError(f"plan is for N={plan.n}, data has N={n}")


def partial_dprt(img, plan, r):
    _check_plan(plan, img.n)
    plan._check_strip(r)
    n = img.n
    f = img.pixels
    rows = np.asarray(plan.rows(r))
    d = np.arange(n)
    out = np.empty((n + 1, n), dtype=np.int64)
    for m in range(n):
        cols = (d[None, :] + m * rows[:, None]) % n
        out[m] = f[rows[:, None], cols].sum(axis=0)
    # the m = N partial sums a column segment of each image row
    out[n] = f[:, rows].sum(axis=1)
    check_width(out, output_width(len(rows), img.bits), "partial DPRT")
    return PartialRadon(r=r, plan=plan, values=out, bits=img.bits)


def _check_cover(parts):
    if not parts:
        raise ValueError("no partial transforms given")
    plan = parts[0].plan
    seen = sorted(p.r for p in parts)
    if any(p.plan != plan for p in parts):
        raise ValueError("partials come from different strip plans")
    if seen != list(range(plan.k)):
        raise ValueError(
            f"partials must cover strips 0..{plan.k - 1} exactly once, got {seen}"
        )
    return plan


def accumulate_partials(parts):
    """Sum the partial DPRTs of all ``K`` strips into the full DPRT."""
    parts = list(parts)
    plan = _check_cover(parts)
    bits = parts[0].bits
    if any(p.bits != bits for p in parts):
        raise ValueError("partials disagree on source bit width")
    total = np.zeros((plan.n + 1, plan.n), dtype=np.int64)
    for p in parts:
        total += p.values
    check_width(total, output_width(plan.n, bits), "accumulated DPRT")
    return RadonArray(total, bits)


def partial_idprt(r_arr, plan, r):
    """Partial back-projection over projection rows ``rH .. rH+L(r)-1``.

    Only the first N rows of ``r_arr`` are stripped; R(N, .) enters in
    :func:`combine_partial_idprt`.
    """
    _check_plan(plan, r_arr.n)
    plan._check_strip(r)
    n = r_arr.n
    vals = r_arr.values
    idx = np.arange(n)
    out = np.zeros((n, n), dtype=np.int64)
    for m in plan.rows(r):
        out += vals[m][(idx[None, :] - m * idx[:, None]) % n]
    return PartialInverse(r=r, plan=plan, values=out)


def combine_partial_idprt(parts, r_arr):
    """Recover the image from all ``K`` partial back-projections."""
    parts = list(parts)
    plan = _check_cover(parts)
    _check_plan(plan, r_arr.n)
    z = np.zeros((plan.n, plan.n), dtype=np.int64)
    for p in parts:
        z += p.values
    return normalize_backprojection(z, r_arr)


def strip_dprt(img, h):
    """Forward DPRT computed strip by strip with height ``h``."""
    plan = make_strip_plan(img.n, h)
    return accumulate_partials(partial_dprt(img, plan, r) for r in range(plan.k))


def strip_idprt(r_arr, h):
    """Inverse DPRT computed strip by strip with height ``h``."""
    plan = make_strip_plan(r_arr.n, h)
    return combine_partial_idprt(
        (partial_idprt(r_arr, plan, r) for r in range(plan.k)), r_arr
    )

