"""Cross-checks of the transforms, strip engine, simulators and cycle model."""

from dataclasses import dataclass

import numpy as np

from ._validation import check_prime
from .core import Image, forward_dprt, inverse_dprt
from .cost import cycle_model, pareto_front
from .sim import run_fdprt, run_ifdprt, run_isfdprt, run_sfdprt
from .strips import strip_dprt, strip_idprt

CHECKS = ("roundtrip", "strips", "simulators", "cycles")


@dataclass(frozen=True)
class CheckResult:
    n: int
    check: str
    passed: bool
    detail: str = ""


def heights(n, policy):
    """Strip heights exercised for size ``n``: the front plus 2 and N, or every H."""
    if policy == "all":
        return list(range(2, n + 1))
    if policy != "front":
        raise ValueError(f"height policy must be 'front' or 'all', got {policy!r}")
    return sorted({p.h for p in pareto_front(n)} | {2, n})


def _check_size(n, bits, hs, rng, trials, fault):
    results = []
    imgs = [Image(rng.integers(0, 1 << bits, (n, n)), bits) for _ in range(trials)]
    refs = [forward_dprt(img) for img in imgs]

    ok = all(inverse_dprt(r) == img for img, r in zip(imgs, refs))
    ok = ok and fault != "roundtrip"
    results.append(CheckResult(n, "roundtrip", ok))

    ok = all(
        strip_dprt(img, h) == r and strip_idprt(r, h) == img
        for img, r in zip(imgs, refs)
        for h in hs
    )
    ok = ok and fault != "strips"
    results.append(CheckResult(n, "strips", ok))

    # the simulators are slow, so they see one image per size
    sim_ok, cyc_ok, bad = True, True, []
    img, ref = imgs[0], refs[0]
    runs = [("fdprt", None, False, lambda: run_fdprt(img))]
    for h in hs:
        runs.append(("sfdprt", h, False, lambda h=h: run_sfdprt(img, h)))
    if n > 2:
        runs.append(("ifdprt", None, False, lambda: run_ifdprt(ref)))
        for h in hs:
            for mem in (False, True):
                runs.append(("isfdprt", h, mem, lambda h=h, mem=mem: run_isfdprt(ref, h, mem)))
    for method, h, mem, run in runs:
        out, rep = run()
        expected = ref if method in ("fdprt", "sfdprt") else img
        if fault == "simulators":
            sim_ok = False
        elif out != expected:
            sim_ok = False
            bad.append(f"{method} H={h} output")
        want = cycle_model(method, n, bits, h, mem)
        if fault == "cycles":
            want += 1
        if rep.total != want:
            cyc_ok = False
            bad.append(f"{method} H={h} cycles {rep.total} != {want}")
    results.append(CheckResult(n, "simulators", sim_ok, "; ".join(b for b in bad if "output" in b)))
    results.append(CheckResult(n, "cycles", cyc_ok, "; ".join(b for b in bad if "cycles" in b)))
    return results


def run_suite(sizes, bits=8, policy="front", seed=0, trials=3, fault=None):
    """Run every check for each size; returns a list of :class:`CheckResult`.

    ``fault`` names one check to force into failure; it exists so the
    negative path of callers can be exercised.
    """
    if fault is not None and fault not in CHECKS:
        raise ValueError(f"unknown fault {fault!r}; expected one of {', '.join(CHECKS)}")
    sizes = [check_prime(n) for n in sizes]
    rng = np.random.default_rng(seed)
    results = []
    for n in sizes:
        results += _check_size(n, bits, heights(n, policy), rng, trials, fault)
    return results


def format_matrix(results):
    """Plain-text pass/fail table, one row per size."""
    sizes = list(dict.fromkeys(r.n for r in results))
    lines = ["N".ljust(6) + "".join(c.ljust(12) for c in CHECKS)]
    for n in sizes:
        cells = {r.check: ("pass" if r.passed else "FAIL") for r in results if r.n == n}
        lines.append(str(n).ljust(6) + "".join(cells.get(c, "-").ljust(12) for c in CHECKS))
    for r in results:
        if r.detail:
            lines.append(f"N={r.n} {r.check}: {r.detail}")
    return "\n".join(lines) + "\n"
