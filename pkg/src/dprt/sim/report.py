from collections import Counter
from dataclasses import dataclass, field

from .._validation import ceil_log2


@dataclass(frozen=True)
class CycleReport:
    """Cycle totals of one simulated run.

    ``phases`` maps phase names to cycle counts in first-seen order; their
    sum is always ``total``. ``trace`` keeps the per-cycle records.
    """

    method: str
    n: int
    bits: int
    h: object
    use_mem_in: bool
    total: int
    phases: dict = field(default_factory=dict)
    trace: tuple = field(default=(), repr=False, compare=False)

    @classmethod
    def from_trace(cls, method, records, *, n, bits, h=None, use_mem_in=False):
        counts = Counter(r.phase for r in records)
        order = list(dict.fromkeys(r.phase for r in records))
        return cls(
            method=method,
            n=n,
            bits=bits,
            h=h,
            use_mem_in=use_mem_in,
            total=len(records),
            phases={p: counts[p] for p in order},
            trace=tuple(records),
        )

    def to_dict(self):
        return {
            "method": self.method,
            "configuration": {
                "N": self.n,
                "B": self.bits,
                "H": self.h,
                "use_mem_in": self.use_mem_in,
            },
            "cycles": {"total": self.total, "phases": dict(self.phases)},
        }


@dataclass(frozen=True)
class InverseDatapathWidths:
    """Bit widths that make the inverse datapath exact.

    ``b_prime`` holds a Radon coefficient, ``bo`` an unnormalized vertical
    tree output (and the divider input), ``bq`` the total sum.
    """

    b_prime: int
    bo: int
    bq: int

    @classmethod
    def for_image(cls, n, bits):
        n_bits = ceil_log2(n)
        b_prime = bits + n_bits
        return cls(b_prime=b_prime, bo=b_prime + ceil_log2(n + 1), bq=b_prime + n_bits)
