"""Cycle-level models of the scalable (iSFDPRT) and fast (iFDPRT) inverse architectures.

Both machines back-project one image row per cycle: with projection row
``m`` rotated right by ``m*i`` the column trees deliver
``sum_m R(m, <j - m i>_N)`` for row ``i``. The back end then adds
``R(N, i)``, subtracts the total ``S`` (summed once from the first
projection by a separate horizontal tree) and divides by ``N``. Every
non-exact step raises :class:`InvalidRadonArray`.

The dividers are modelled as fully pipelined with ``BO`` stages, ``BO``
being the width of their input.
"""

import numpy as np

from .._validation import InvalidRadonArray, ceil_log2, check_width
from ..core import Image, RadonArray
from ..strips import make_strip_plan
from .components import (
    AdderTreeBank,
    Clock,
    DualPortMemory,
    ShiftRegisterArray,
    StagePipeline,
)
from .report import CycleReport

__all__ = ["ISFDPRTMachine", "IFDPRTMachine", "run_isfdprt", "run_ifdprt"]


def _check_radon(r_arr):
    if not isinstance(r_arr, RadonArray):
        raise TypeError(f"expected a RadonArray, got {type(r_arr).__name__}")
    if r_arr.n == 2:
        raise ValueError("the inverse architectures need an odd prime N (N=2 unsupported)")
    return r_arr


class _Normalizer:
    """Latch for ``S`` plus the subtract / divide / range-check steps."""

    def __init__(self, clock, n, bits, name):
        self.clock = clock
        self.n = n
        self.bits = bits
        self.name = name
        self.s = None

    def latch(self, token):
        _, row = token
        self.s = int(row[0])
        self.clock.log(f"{self.name}.latch")
        return None

    def subtract(self, token):
        i, z = token
        if self.s is None:
            raise AssertionError("total sum used before it was latched")
        num = z - self.s
        if num.min() < 0:
            raise InvalidRadonArray(f"negative numerator in image row {i}")
        return i, num

    def divide(self, token):
        i, num = token
        q, rem = np.divmod(num, self.n)
        if np.any(rem):
            raise InvalidRadonArray(f"numerator of image row {i} not divisible by N")
        return i, q

    def check_pixels(self, i, q):
        if q.max() >= (1 << self.bits):
            raise InvalidRadonArray(f"image row {i} exceeds {self.bits} bits")


class ISFDPRTMachine:
    """H x N CLS core over projection strips, MEM_OUT accumulator and N dividers."""

    def __init__(self, n, bits, h, use_mem_in=False):
        self.plan = make_strip_plan(n, h)
        self.n = n
        self.bits = bits
        self.use_mem_in = use_mem_in
        nb = ceil_log2(n)
        self.b_prime = bits + nb
        self.bo = bits + 2 * nb
        self.clock = Clock()
        clk = self.clock
        self.mem_in = (
            DualPortMemory(clk, n, n, self.b_prime, "MEM_IN") if use_mem_in else None
        )
        self.core = ShiftRegisterArray(clk, h, n, self.b_prime, "CORE")
        self.rn = ShiftRegisterArray(clk, 1, n, self.b_prime, "RN")
        self.tree = AdderTreeBank(clk, h, n, self.b_prime, "TREE")
        self.s_tree = AdderTreeBank(clk, n, 1, self.b_prime, "S_TREE")
        self.mem_out = DualPortMemory(clk, n, n, self.bo, "MEM_OUT")
        self.norm = _Normalizer(clk, n, bits, "S")
        StagePipeline(clk, [self.norm.latch], source=self.s_tree)
        stages = [self._add_rn, self._accumulate, self.norm.subtract, self.norm.divide]
        stages += [None] * (self.bo - 1) + [self._store]
        StagePipeline(clk, stages, source=self.tree)

    def _fetch(self, r_arr, m):
        if m >= self.n:
            return np.zeros(self.n, np.int64)
        if self.use_mem_in:
            return self.mem_in.read_row(m)
        self.clock.log(f"IN.r[{m}]", memory=True)
        return r_arr.values[m]

    def _add_rn(self, token):
        (r, i), z = token
        if r == self.plan.k - 1:
            z = z + self.rn.values[0, 0]
            self.rn.rotate_left(1)
        return (r, i), z

    def _accumulate(self, token):
        (r, i), z = token
        acc = self.mem_out.read_row(i) + z if r else z
        if r < self.plan.k - 1:
            self.mem_out.write_row(i, acc)
            return None
        return i, acc

    def _store(self, token):
        i, q = token
        self.norm.check_pixels(i, q)
        self.mem_out.write_row(i, q)
        return None

    def run(self, r_arr):
        n, h, k = self.n, self.plan.h, self.plan.k
        if self.use_mem_in:
            for m in range(n):
                self.clock.begin("mem_in_load")
                self.clock.log(f"IN.r[{m}]", memory=True)
                self.mem_in.write_row(m, r_arr.values[m])
                self.clock.tick()
        for r in range(k):
            for a in range(h):
                self.clock.begin("strip_load", strip=r)
                self.core.push(self._fetch(r_arr, r * h + a))
                self.clock.tick()
            strides = -(r * h + np.arange(h))
            for i in range(n):
                self.clock.begin("backprojection", strip=r, direction=i)
                if r == 0 and i == 0:
                    self.s_tree.capture(self.core.values[:1].T, "S")
                if r == k - 1 and i == 0:
                    self.clock.log(f"IN.r[{n}]", memory=True)
                    self.rn.load_parallel(r_arr.values[n][None, :], "load")
                self.tree.capture(self.core.values, (r, i))
                self.core.rotate_left(strides)
                self.clock.tick()
        self.clock.drain()
        return Image(self.mem_out.cells.copy(), self.bits)


def run_isfdprt(r_arr, h, use_mem_in=False):
    """Simulate the strip-scalable inverse; returns ``(Image, CycleReport)``.

    Cycle total: ``ceil(N/H)(N + H) + ceil(log2 H) + B + 2 ceil(log2 N) + 3``,
    plus ``N`` when the projections are first buffered in MEM_IN.
    """
    _check_radon(r_arr)
    m = ISFDPRTMachine(r_arr.n, r_arr.bits_in, h, use_mem_in=use_mem_in)
    img = m.run(r_arr)
    report = CycleReport.from_trace(
        "isfdprt",
        m.clock.records,
        n=r_arr.n,
        bits=r_arr.bits_in,
        h=m.plan.h,
        use_mem_in=bool(use_mem_in),
    )
    return img, report


class IFDPRTMachine:
    """(N+1) x N CLS register array, N (N+1)-operand trees and N dividers."""

    def __init__(self, n, bits):
        self.n = n
        self.bits = bits
        nb = ceil_log2(n)
        self.b_prime = bits + nb
        self.bo = self.b_prime + ceil_log2(n + 1)
        self.clock = Clock()
        clk = self.clock
        self.regs = ShiftRegisterArray(clk, n + 1, n, self.b_prime, "REGS")
        self.tree = AdderTreeBank(clk, n + 1, n, self.b_prime, "TREE")
        self.s_tree = AdderTreeBank(clk, n, 1, self.b_prime, "S_TREE")
        self.norm = _Normalizer(clk, n, bits, "S")
        self.out = np.zeros((n, n), dtype=np.int64)
        StagePipeline(clk, [self.norm.latch], source=self.s_tree)
        stages = [self.norm.subtract, self.norm.divide] + [None] * (self.bo - 1)
        StagePipeline(clk, stages + [self._store], source=self.tree)

    def _store(self, token):
        i, q = token
        self.norm.check_pixels(i, q)
        check_width(q, self.bits, "iFDPRT output")
        self.clock.log(f"OUT.w[{i}]", memory=True)
        self.out[i] = q
        return None

    def run(self, r_arr):
        n = self.n
        for m in range(n + 1):
            self.clock.begin("load")
            self.clock.log(f"IN.r[{m}]", memory=True)
            self.regs.push(r_arr.values[m])
            self.clock.tick()
        # rows m < N rotate right by m; row N rotates left by one so that
        # its leftmost cell holds R(N, i) when row i is formed
        amounts = np.concatenate([-np.arange(n), [1]])
        for i in range(n):
            self.clock.begin("backprojection", direction=i)
            vals = self.regs.values
            if i == 0:
                self.s_tree.capture(vals[:1].T, "S")
            operands = np.vstack([vals[:n], np.full((1, n), vals[n, 0])])
            self.tree.capture(operands, i)
            self.regs.rotate_left(amounts)
            self.clock.tick()
        self.clock.drain()
        return Image(self.out.copy(), self.bits)


def run_ifdprt(r_arr):
    """Simulate the fast inverse; ``2N + 3 ceil(log2 N) + B + 2`` cycles."""
    _check_radon(r_arr)
    m = IFDPRTMachine(r_arr.n, r_arr.bits_in)
    img = m.run(r_arr)
    report = CycleReport.from_trace(
        "ifdprt", m.clock.records, n=r_arr.n, bits=r_arr.bits_in, h=r_arr.n
    )
    return img, report
