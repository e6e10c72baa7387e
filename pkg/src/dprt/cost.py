"""Closed-form cycle and resource models and the strip-height Pareto front.

All arithmetic is integer. Serial and systolic architectures only appear
here as comparison baselines; their multiplexer counts are not known and are
reported as ``None``.
"""

import csv
import io
from dataclasses import asdict, dataclass

from ._validation import ceil_log2, check_bits, check_prime

__all__ = [
    "METHODS",
    "SCALABLE",
    "TreeResources",
    "ResourceReport",
    "ParetoPoint",
    "tree_resources",
    "cycle_model",
    "resource_model",
    "pareto_front",
    "strip_count",
    "pareto_csv",
    "baseline_rows",
    "on_front",
    "rows_to_csv",
]

METHODS = ("serial", "systolic", "sfdprt", "fdprt", "isfdprt", "ifdprt")
SCALABLE = ("sfdprt", "isfdprt")


@dataclass(frozen=True)
class TreeResources:
    a_fa: int
    a_ff: int
    a_mux: int


def tree_resources(x, b):
    """Full adders, flip-flops and 2-to-1 MUXes of one pipelined ``x``-operand tree.

    Each level pairs the surviving operands, an odd one is carried to the next
    level, and every level ends in a register. Output registers are counted,
    input registers are not.
    """
    if x < 1 or b < 1:
        raise ValueError(f"tree_resources needs x >= 1 and b >= 1, got x={x}, b={b}")
    a = x
    fa = ff = mux = 0
    for z in range(1, ceil_log2(x) + 1):
        r = a % 2
        a //= 2
        fa += a * (b + z - 1)
        mux += a * b
        a += r
        ff += a * (b + z)
    return TreeResources(a_fa=fa, a_ff=ff, a_mux=mux)


def strip_count(n, h):
    return -(-n // h)


def _check_method(method):
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


def _check_h(method, n, h):
    if method not in SCALABLE:
        return None
    if h is None:
        raise ValueError(f"method {method!r} needs a strip height H")
    if not isinstance(h, int) or not 2 <= h <= n:
        raise ValueError(f"strip height must satisfy 2 <= H <= N={n}, got {h!r}")
    return h


def cycle_model(method, n, b=8, h=None, use_mem_in=False):
    """Total clock cycles of ``method`` for an ``n`` x ``n``, ``b``-bit image."""
    _check_method(method)
    n = check_prime(n)
    b = check_bits(b)
    h = _check_h(method, n, h)
    nb = ceil_log2(n)
    if method == "serial":
        return n**3 + 2 * n**2 + n
    if method == "systolic":
        return n**2 + n + 1
    if method == "fdprt":
        return 2 * n + nb + 1
    if method == "ifdprt":
        return 2 * n + 3 * nb + b + 2
    k = strip_count(n, h)
    hl = ceil_log2(h)
    if method == "sfdprt":
        return k * (n + 3 * h + 3) + n + hl + 1
    total = k * (n + h) + hl + 3 + b + 2 * nb
    return total + n if use_mem_in else total


@dataclass(frozen=True)
class ResourceReport:
    """Resource counts of one architecture.

    ``one_bit_additions`` and ``mux_count`` cover the register array and
    adder trees; divider costs are kept in the ``divider_*`` fields and only
    the divider flip-flops enter ``total_flipflops``.
    """

    method: str
    n: int
    b: int
    h: object
    register_array_bits: int
    adder_tree_flipflops: int
    one_bit_additions: int
    ram_bits: int
    mux_count: object
    divider_count: int
    divider_flipflops: int
    divider_additions: int
    divider_muxes: int

    @property
    def total_flipflops(self):
        return self.register_array_bits + self.adder_tree_flipflops + self.divider_flipflops

    def to_dict(self):
        d = asdict(self)
        d["total_flipflops"] = self.total_flipflops
        return d


def _divider(n, b, nb):
    w = b + 2 * nb
    return {"count": n, "ff": 3 * w * w * n, "adds": w * w * n, "mux": w * w * n}


def resource_model(method, n, b=8, h=None):
    """Register, flip-flop, 1-bit adder, RAM and MUX counts of ``method``."""
    _check_method(method)
    n = check_prime(n)
    b = check_bits(b)
    h = _check_h(method, n, h)
    nb = ceil_log2(n)
    bp = b + nb
    div = {"count": 0, "ff": 0, "adds": 0, "mux": 0}
    if method == "serial":
        reg, ff, adds, ram, mux = n * bp, 3 * b + 2 * nb, bp, n * n * b, None
    elif method == "systolic":
        reg = n * (n + 1) * nb
        ff = (n + 1) * (3 * b + 2 * nb)
        adds = (n + 1) * bp
        ram, mux = n * (n + 1) * bp, None
    elif method == "fdprt":
        t = tree_resources(n, b)
        reg, ff, adds = n * n * b, n * t.a_ff, n * t.a_fa
        ram, mux = 0, 2 * n * n * b
    elif method == "sfdprt":
        k = strip_count(n, h)
        t = tree_resources(h, b)
        reg, ff = n * h * b, n * t.a_ff
        adds = n * t.a_fa + n * bp
        ram = n * n * b + n * (n + 1) * bp
        mux = n * h * tree_resources(k + 1, b).a_mux
    elif method == "ifdprt":
        t = tree_resources(n, bp)
        div = _divider(n, b, nb)
        reg = n * n * bp
        ff = (n + 1) * t.a_ff + n * (b + 2 * nb)
        adds = (n + 1) * t.a_fa + n * (b + 2 * nb)
        ram, mux = 0, n * n * bp
    else:  # isfdprt
        k = strip_count(n, h)
        t = tree_resources(h, bp)
        div = _divider(n, b, nb)
        reg = n * h * bp
        ff = (n + 1) * t.a_ff + 3 * n * (b + 2 * nb)
        adds = (n + 1) * t.a_fa + 2 * n * (b + 2 * nb)
        ram = n * n * (b + 2 * nb)
        mux = n * h * tree_resources(k + 1, bp).a_mux
    return ResourceReport(
        method=method,
        n=n,
        b=b,
        h=h,
        register_array_bits=reg,
        adder_tree_flipflops=ff,
        one_bit_additions=adds,
        ram_bits=ram,
        mux_count=mux,
        divider_count=div["count"],
        divider_flipflops=div["ff"],
        divider_additions=div["adds"],
        divider_muxes=div["mux"],
    )


@dataclass(frozen=True)
class ParetoPoint:
    h: int
    k: int
    cycles: int
    resources: ResourceReport

    def to_row(self):
        r = self.resources
        return {
            "method": r.method,
            "H": self.h,
            "K": self.k,
            "cycles": self.cycles,
            "flipflops": r.total_flipflops,
            "adders": r.one_bit_additions,
            "ram_bits": r.ram_bits,
            "muxes": "" if r.mux_count is None else r.mux_count,
        }


def on_front(n, h):
    """True when height ``h`` needs strictly fewer strips than ``h - 1``."""
    return strip_count(n, h) < strip_count(n, h - 1)


def pareto_front(n, b=8, inverse=False):
    """Strip heights in ``2..(N-1)/2`` that cut the strip count, ascending.

    Each point carries forward (``sfdprt``) costs, or inverse (``isfdprt``)
    costs when ``inverse`` is set.
    """
    n = check_prime(n)
    method = "isfdprt" if inverse else "sfdprt"
    points = []
    for h in range(2, (n - 1) // 2 + 1):
        if on_front(n, h):
            points.append(
                ParetoPoint(
                    h=h,
                    k=strip_count(n, h),
                    cycles=cycle_model(method, n, b, h),
                    resources=resource_model(method, n, b, h),
                )
            )
    return points


def baseline_rows(n, b=8, inverse=False):
    """Comparison rows for the non-scalable architectures."""
    methods = ("ifdprt",) if inverse else ("serial", "systolic", "fdprt")
    rows = []
    for m in methods:
        r = resource_model(m, n, b)
        rows.append(
            ParetoPoint(h=None, k=None, cycles=cycle_model(m, n, b), resources=r).to_row()
        )
    return rows


CSV_FIELDS = ("method", "H", "K", "cycles", "flipflops", "adders", "ram_bits", "muxes")


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def pareto_csv(n, b=8, inverse=False, baselines=True):
    """CSV text: one row per front point, then the baseline rows."""
    rows = [p.to_row() for p in pareto_front(n, b, inverse)]
    if baselines:
        rows += baseline_rows(n, b, inverse)
    return rows_to_csv(rows)
