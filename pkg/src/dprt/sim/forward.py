"""Cycle-level models of the scalable (SFDPRT) and fast (FDPRT) forward architectures.

SFDPRT memory mapping
---------------------
``load_shifted_image`` passes every strip through the core, rotates the row
with absolute index ``q`` left by ``q + 1`` and writes it back flipped, so
``MEM_IN`` word ``w`` of bank ``j`` ends up holding ``f(w, <w - j>_N)``.
Consequences relied on below:

* row mode: reading row ``q`` flipped gives ``f(q, <q + 1 + p>)`` in cell
  ``p``; one right rotation by ``q + 1`` restores the image row;
* column mode at base ``d`` returns bank ``j`` = ``f(<d + j>_N, d)``, i.e.
  all of image column ``d`` starting at row ``d``. Loaded flipped and
  rotated left by ``d`` it puts ``f(N-1-p, d)`` in cell ``p``, so the column
  trees produce the last projection reversed and ``add_partial_result``
  flips it back.
"""

from collections import deque

import numpy as np

from .._validation import check_width
from ..core import RadonArray, output_width
from ..strips import make_strip_plan
from .components import (
    AdderTreeBank,
    Clock,
    DualPortMemory,
    ShiftRegisterArray,
    StagePipeline,
)
from .report import CycleReport

__all__ = ["SFDPRTMachine", "FDPRTMachine", "run_sfdprt", "run_fdprt"]

ROW_MODE = "row"
COLUMN_MODE = "column"


class SFDPRTMachine:
    """MEM_IN, an H x N CLS register core with N H-operand trees, and MEM_OUT.

    Each public method issues whole cycles on ``self.clock``; the adder-tree
    outputs are folded into ``MEM_OUT`` by a one-stage back end running
    ``add_partial_result`` in the cycle they emerge.
    """

    def __init__(self, n, bits, h):
        self.plan = make_strip_plan(n, h)
        self.n = n
        self.bits = bits
        self.clock = Clock()
        self.mem_in = DualPortMemory(self.clock, n, n, bits, "MEM_IN", write_first=True)
        self.core = ShiftRegisterArray(self.clock, h, n, bits, "CORE")
        self.tree = AdderTreeBank(self.clock, h, n, bits, "TREE")
        self.mem_out = DualPortMemory(self.clock, n + 1, n, output_width(n, bits), "MEM_OUT")
        StagePipeline(self.clock, [self._retire], source=self.tree)
        self.emitted = []
        self._writeback = deque()
        self._pending_capture = None

    def _strides(self, r):
        return r * self.plan.h + np.arange(self.plan.h)

    def _cycle_prelude(self):
        # work left over from the previous step: a deferred tree capture
        # (last-projection strips) and MEM_IN write-back of the final strip
        if self._pending_capture is not None:
            self.tree.capture(self.core.values, self._pending_capture)
            self._pending_capture = None
        if self._writeback:
            addr = self._writeback.popleft()
            self.mem_in.write_row(addr, self.core.top[::-1])

    def load_shifted_image(self, img):
        """Fill MEM_IN and rearrange it so every column is one diagonal.

        Takes ``N + K(H+1)`` cycles. The write-back of the last strip is
        left pending and overlaps the next ``load_strip`` (or
        :meth:`flush_writeback`).
        """
        if img.n != self.n or img.bits > self.bits:
            raise ValueError(f"image {img!r} does not fit a machine for N={self.n}, B={self.bits}")
        n, h, k = self.n, self.plan.h, self.plan.k
        start = self.clock.cycle
        for y in range(n):
            self.clock.begin("image_load")
            self.mem_in.write_row(y, img.pixels[y])
            self.clock.tick()
        for z in range(k):
            for y in range(h):
                self.clock.begin("image_load", strip=z)
                row = z * h + y
                data = self.mem_in.read_row(row) if row < n else np.zeros(n, np.int64)
                top = self.core.push(data)
                if z > 0:
                    self.mem_in.write_row((z - 1) * h + y, top[::-1])
                self.clock.tick()
            self.clock.begin("image_load", strip=z)
            self.core.rotate_left(self._strides(z) + 1)
            self.clock.tick()
        last = k - 1
        self._writeback.extend(last * h + y for y in range(self.plan.lengths[last]))
        return self.clock.cycle - start

    def read_image_column(self, d):
        """Column-mode read at base ``d``: image column ``d``, bank ``j`` from row ``<d + j>``."""
        return self.mem_in.read_column(d)

    def flush_writeback(self):
        """Finish a pending MEM_IN write-back on its own, one row per cycle."""
        start = self.clock.cycle
        while self._writeback:
            self.clock.begin("writeback")
            addr = self._writeback.popleft()
            self.mem_in.write_row(addr, self.core.push(np.zeros(self.n, np.int64))[::-1])
            self.clock.tick()
        return self.clock.cycle - start

    def load_strip(self, r, mode, phase=None):
        """Move strip ``r`` into the core and align it; ``H + 1`` cycles.

        Row mode fetches MEM_IN rows ``rH..``; column mode fetches
        column-mode words at bases ``rH..``. Both enter the core flipped;
        rows past ``N - 1`` are zero-filled.
        """
        self.plan._check_strip(r)
        if mode not in (ROW_MODE, COLUMN_MODE):
            raise ValueError(f"mode must be 'row' or 'column', got {mode!r}")
        phase = phase or ("projections" if mode == ROW_MODE else "last_projection")
        n, h = self.n, self.plan.h
        start = self.clock.cycle
        for z in range(h):
            self.clock.begin(phase, strip=r)
            self._cycle_prelude()
            q = r * h + z
            if q >= n:
                data = np.zeros(n, np.int64)
            elif mode == ROW_MODE:
                data = self.mem_in.read_row(q)[::-1]
            else:
                data = self.mem_in.read_column(q)[::-1]
            self.core.push(data)
            self.clock.tick()
        self.clock.begin(phase, strip=r)
        if mode == ROW_MODE:
            self.core.rotate_left(-(self._strides(r) + 1))
        else:
            self.core.rotate_left(self._strides(r))
        self.clock.tick()
        if mode == COLUMN_MODE:
            self._pending_capture = (r, n)
        return self.clock.cycle - start

    def step_projection(self, r, k):
        """One cycle: feed the trees with direction ``k`` and rotate every row."""
        self.clock.begin("projections", strip=r, direction=k)
        self.tree.capture(self.core.values, (r, k))
        self.core.rotate_left(self._strides(r))
        self.clock.tick()

    def capture_pending(self, phase="last_projection"):
        """Spend one cycle on a deferred last-projection capture."""
        self.clock.begin(phase, strip=self._pending_capture[0], direction=self.n)
        self._cycle_prelude()
        self.clock.tick()

    def add_partial_result(self, k, partial):
        """Read-modify-write of MEM_OUT row ``k`` within the current cycle."""
        partial = np.asarray(partial, dtype=np.int64)
        if k == self.n:
            partial = partial[::-1]
        acc = self.mem_out.read_row(k) + partial
        self.mem_out.write_row(k, acc)
        return acc

    def _retire(self, token):
        (r, k), row = token
        self.emitted.append((r, k, row))
        self.add_partial_result(k, row)
        return None

    def result(self):
        return RadonArray(self.mem_out.cells.copy(), self.bits)


def run_sfdprt(img, h):
    """Simulate the strip-scalable forward DPRT; returns ``(RadonArray, CycleReport)``.

    Cycle total: ``ceil(N/H)(N + 3H + 3) + N + ceil(log2 H) + 1``.
    """
    m = SFDPRTMachine(img.n, img.bits, h)
    m.load_shifted_image(img)
    for r in range(m.plan.k):
        m.load_strip(r, ROW_MODE)
        for k in range(img.n):
            m.step_projection(r, k)
    for r in range(m.plan.k):
        m.load_strip(r, COLUMN_MODE)
    m.capture_pending()
    m.clock.drain()
    report = CycleReport.from_trace(
        "sfdprt", m.clock.records, n=img.n, bits=img.bits, h=m.plan.h
    )
    return m.result(), report


class FDPRTMachine:
    """N x N CLS register array with fast transposition and N N-operand trees."""

    def __init__(self, n, bits):
        self.n = n
        self.bits = bits
        self.clock = Clock()
        self.regs = ShiftRegisterArray(self.clock, n, n, bits, "REGS")
        self.tree = AdderTreeBank(self.clock, n, n, bits, "TREE")
        StagePipeline(self.clock, [self._emit], source=self.tree)
        self.out = np.zeros((n + 1, n), dtype=np.int64)
        self.emitted = []

    def load_image(self, img):
        for i in range(self.n):
            self.clock.begin("image_load")
            self.clock.log(f"IN.r[{i}]", memory=True)
            self.regs.push(img.pixels[i])
            self.clock.tick()

    def transpose_routing(self):
        """Register contents after the single-cycle transposition.

        Called after ``N-1`` rotations, when row ``i`` holds ``f(i, <p - i>)``;
        the multiplexers route cell ``(p, <i + p>)`` into ``(i, p)``, giving
        ``f(p, i)`` there.
        """
        n = self.n
        i, p = np.indices((n, n))
        return self.regs.values[p, (i + p) % n]

    def _emit(self, token):
        k, row = token
        check_width(row, output_width(self.n, self.bits), "FDPRT output")
        self.clock.log(f"OUT.w[{k}]", memory=True)
        self.out[k] = row
        self.emitted.append((k, row))
        return None

    def run(self, img):
        n = self.n
        self.load_image(img)
        strides = np.arange(n)
        for k in range(n):
            self.clock.begin("projections", direction=k)
            self.tree.capture(self.regs.values, k)
            if k < n - 1:
                self.regs.rotate_left(strides)
            else:
                self.regs.load_parallel(self.transpose_routing(), "transpose")
            self.clock.tick()
        self.clock.begin("last_projection", direction=n)
        self.tree.capture(self.regs.values, n)
        self.clock.tick()
        self.clock.drain()
        return RadonArray(self.out.copy(), self.bits)


def run_fdprt(img):
    """Simulate the fast forward DPRT; ``2N + ceil(log2 N) + 1`` cycles."""
    m = FDPRTMachine(img.n, img.bits)
    r = m.run(img)
    return r, CycleReport.from_trace("fdprt", m.clock.records, n=img.n, bits=img.bits, h=img.n)


