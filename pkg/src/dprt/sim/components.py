"""Clocked datapath building blocks.

Every component follows the same two-phase discipline: during a cycle all
reads see the state committed at the end of the previous cycle and all
updates are only scheduled; :meth:`Clock.tick` then runs the back-end stage
pipelines, commits every component at once and appends one trace record.
Components count their own operations and raise
:class:`DisciplineViolation` as soon as a cycle exceeds what the hardware can
do (one mutation per register array, one capture per tree bank, one read and
one write per dual-port memory).
"""

from dataclasses import dataclass

import numpy as np

from .._validation import ceil_log2, check_width


class DisciplineViolation(AssertionError):
    """More work was scheduled in one cycle than the datapath allows."""


@dataclass(frozen=True)
class TraceRecord:
    cycle: int
    phase: str
    strip: object
    direction: object
    mem_ops: tuple
    ops: tuple

    def format(self):
        strip = "-" if self.strip is None else str(self.strip)
        direction = "-" if self.direction is None else str(self.direction)
        mem = ";".join(self.mem_ops) if self.mem_ops else "-"
        return f"{self.cycle},{self.phase},{strip},{direction},{mem}"


TRACE_HEADER = "cycle,phase,strip,direction,mem_ops"


def format_trace(records):
    return "\n".join([TRACE_HEADER] + [r.format() for r in records]) + "\n"


class Clock:
    """Global cycle counter; cycles are numbered from 1."""

    def __init__(self):
        self.cycle = 1
        self.records = []
        self._components = []
        self._backends = []
        self._mem_ops = []
        self._ops = []
        self._label = ("idle", None, None)

    def attach(self, component):
        self._components.append(component)
        return component

    def attach_backend(self, pipeline, source):
        self._backends.append((pipeline, source))
        return pipeline

    def begin(self, phase, strip=None, direction=None):
        self._label = (phase, strip, direction)

    def log(self, text, memory=False):
        (self._mem_ops if memory else self._ops).append(text)

    @property
    def busy(self):
        return any(c.busy for c in self._components) or any(
            p.busy for p, _ in self._backends
        )

    def tick(self):
        for pipeline, source in self._backends:
            pipeline.step(source.output() if source is not None else None)
        for c in self._components:
            c.commit()
        phase, strip, direction = self._label
        self.records.append(
            TraceRecord(
                self.cycle, phase, strip, direction, tuple(self._mem_ops), tuple(self._ops)
            )
        )
        self._mem_ops = []
        self._ops = []
        self.cycle += 1

    def drain(self, phase="drain"):
        """Advance idle cycles until no pipeline holds work."""
        while self.busy:
            self.begin(phase)
            self.tick()

    @property
    def completed(self):
        return self.cycle - 1


class DualPortMemory:
    """``words`` x ``banks`` RAM with one read and one write port.

    Word ``a`` of every bank forms row ``a``. A column-mode read at base
    ``A`` fetches bank ``i`` at word ``<A + i>_N``. With ``write_first`` a
    read of a word being written in the same cycle returns the new data.
    """

    busy = False

    def __init__(self, clock, words, banks, width, name, write_first=False):
        clock.attach(self)
        self.clock = clock
        self.cells = np.zeros((words, banks), dtype=np.int64)
        self.width = width
        self.name = name
        self.write_first = write_first
        self._pending = None
        self._reads = 0

    def _view(self):
        if self.write_first and self._pending is not None:
            cells = self.cells.copy()
            addr, data = self._pending
            cells[addr] = data
            return cells
        return self.cells

    def _count_read(self):
        self._reads += 1
        if self._reads > 1:
            raise DisciplineViolation(f"{self.name}: two reads in cycle {self.clock.cycle}")

    def read_row(self, addr):
        self._count_read()
        self.clock.log(f"{self.name}.r[{addr}]", memory=True)
        return self._view()[addr].copy()

    def read_column(self, base):
        self._count_read()
        self.clock.log(f"{self.name}.c[{base}]", memory=True)
        banks = self.cells.shape[1]
        idx = np.arange(banks)
        return self._view()[(base + idx) % self.cells.shape[0], idx].copy()

    def write_row(self, addr, data):
        if self._pending is not None:
            raise DisciplineViolation(f"{self.name}: two writes in cycle {self.clock.cycle}")
        data = np.asarray(data, dtype=np.int64)
        check_width(data, self.width, f"{self.name} word")
        self.clock.log(f"{self.name}.w[{addr}]", memory=True)
        self._pending = (addr, data.copy())

    def commit(self):
        if self._pending is not None:
            addr, data = self._pending
            self.cells[addr] = data
        self._pending = None
        self._reads = 0


class ShiftRegisterArray:
    """Array of circular shift registers, ``rows`` x ``cols`` cells.

    Rows can be pushed in at the bottom (the top row falls out), rotated by
    per-row amounts, or reloaded in parallel through the input multiplexers.
    Only one of these happens per cycle.
    """

    busy = False

    def __init__(self, clock, rows, cols, width, name):
        clock.attach(self)
        self.clock = clock
        self.values = np.zeros((rows, cols), dtype=np.int64)
        self.width = width
        self.name = name
        self._next = None

    @property
    def top(self):
        return self.values[0].copy()

    def _schedule(self, nxt, op):
        if self._next is not None:
            raise DisciplineViolation(
                f"{self.name}: second register update ({op}) in cycle {self.clock.cycle}"
            )
        check_width(nxt, self.width, f"{self.name} register")
        self.clock.log(f"{self.name}.{op}")
        self._next = nxt

    def push(self, row):
        """Shift rows up by one, entering ``row`` at the bottom; returns the old top."""
        row = np.asarray(row, dtype=np.int64)
        self._schedule(np.vstack([self.values[1:], row[None, :]]), "push")
        return self.top

    def rotate_left(self, amounts):
        """Circular left shift of row ``a`` by ``amounts[a]`` (negative: right shift)."""
        amounts = np.broadcast_to(np.asarray(amounts, dtype=np.int64), (self.values.shape[0],))
        cols = self.values.shape[1]
        idx = (np.arange(cols)[None, :] + amounts[:, None]) % cols
        rows = np.arange(self.values.shape[0])[:, None]
        self._schedule(self.values[rows, idx], "shift")

    def load_parallel(self, values, op="mux"):
        self._schedule(np.asarray(values, dtype=np.int64).copy(), op)

    def commit(self):
        if self._next is not None:
            self.values = self._next
        self._next = None


def _reduce_pairs(a):
    """One adder-tree level: sum adjacent operand pairs, pass an odd one through."""
    paired = a[: len(a) // 2 * 2].reshape(-1, 2, a.shape[1]).sum(axis=1)
    if len(a) % 2:
        paired = np.vstack([paired, a[-1:]])
    return paired


class AdderTreeBank:
    """``columns`` identical fully pipelined trees of ``operands`` inputs.

    The first level reads the captured operands combinationally; each of the
    ``ceil(log2 operands)`` levels ends in a register, so data captured in
    cycle ``t`` is visible at the output during cycle ``t + latency``.
    Level ``z`` results are checked against ``width + z`` bits.
    """

    def __init__(self, clock, operands, columns, width, name):
        clock.attach(self)
        self.clock = clock
        self.operands = operands
        self.columns = columns
        self.width = width
        self.name = name
        self.latency = ceil_log2(operands)
        self._stages = [None] * self.latency
        self._captured = None

    @property
    def busy(self):
        return any(s is not None for s in self._stages)

    def capture(self, operands, tag):
        ops = np.asarray(operands, dtype=np.int64)
        if ops.shape != (self.operands, self.columns):
            raise ValueError(
                f"{self.name}: expected operands of shape {(self.operands, self.columns)}, "
                f"got {ops.shape}"
            )
        if self._captured is not None:
            raise DisciplineViolation(f"{self.name}: two captures in cycle {self.clock.cycle}")
        check_width(ops, self.width, f"{self.name} input")
        self.clock.log(f"{self.name}.capture")
        self._captured = (tag, ops)

    def output(self):
        """``(tag, row)`` leaving the trees this cycle, or ``None``."""
        if self.latency == 0:
            if self._captured is None:
                return None
            tag, ops = self._captured
            return tag, ops[0].copy()
        last = self._stages[-1]
        if last is None:
            return None
        tag, arr = last
        return tag, arr[0].copy()

    def commit(self):
        new = [None] * self.latency
        if self.latency:
            if self._captured is not None:
                tag, ops = self._captured
                new[0] = (tag, _reduce_pairs(ops))
            for z in range(1, self.latency):
                if self._stages[z - 1] is not None:
                    tag, arr = self._stages[z - 1]
                    new[z] = (tag, _reduce_pairs(arr))
            for z, st in enumerate(new):
                if st is not None:
                    check_width(st[1], self.width + z + 1, f"{self.name} level {z + 1}")
        self._stages = new
        self._captured = None


class StagePipeline:
    """Chain of single-cycle stages fed by a tree bank's output.

    ``stages[i]`` is called with the token during the ``i``-th cycle after it
    leaves the trees (``None`` entries model pure delay, e.g. divider
    occupancy). A stage returns the token to keep it flowing or ``None`` to
    retire it early.
    """

    def __init__(self, clock, stages, source=None):
        self.stages = list(stages)
        self._slots = [None] * len(self.stages)
        clock.attach_backend(self, source)

    @property
    def busy(self):
        return any(tok is not None for tok in self._slots[:-1])

    def step(self, incoming):
        slots = [incoming] + self._slots[:-1]
        for i, tok in enumerate(slots):
            if tok is not None and self.stages[i] is not None:
                slots[i] = self.stages[i](tok)
        self._slots = slots
