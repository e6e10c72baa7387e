"""End-to-end acceptance checks; a summary line per criterion is printed at the end of the run."""

import numpy as np
import pytest

from dprt.core import Image, forward_dprt, inverse_dprt
from dprt.cost import cycle_model, pareto_front, resource_model, tree_resources
from dprt.sim import run_fdprt, run_ifdprt, run_isfdprt, run_sfdprt
from dprt.strips import strip_dprt, strip_idprt
from oracles import ceil_div, clog2

CORPUS_SIZES = (3, 5, 7, 11, 13, 17, 31, 61)
PER_SIZE = 50


def corpus(n, b):
    rng = np.random.default_rng(1000 * n + b)
    return [Image(rng.integers(0, 1 << b, (n, n)), b) for _ in range(PER_SIZE)]


def front_heights(n):
    return sorted({p.h for p in pareto_front(n)} | {2, n})


@pytest.mark.criterion(1, "perfect reconstruction on 50 random images per (N, B)")
@pytest.mark.parametrize("b", [4, 8])
@pytest.mark.parametrize("n", CORPUS_SIZES)
def test_criterion_1_perfect_reconstruction(n, b):
    for img in corpus(n, b):
        assert inverse_dprt(forward_dprt(img)) == img


@pytest.mark.criterion(2, "strip decomposition equals direct transforms for front heights, 2 and N")
@pytest.mark.parametrize("b", [4, 8])
@pytest.mark.parametrize("n", CORPUS_SIZES)
def test_criterion_2_strip_equivalence(n, b):
    hs = front_heights(n)
    for img in corpus(n, b):
        r = forward_dprt(img)
        for h in hs:
            assert strip_dprt(img, h) == r
            assert strip_idprt(r, h) == inverse_dprt(r)


@pytest.mark.criterion(3, "simulator outputs equal the reference transforms")
@pytest.mark.parametrize("n", [5, 7, 11, 17])
def test_criterion_3_simulator_equality(n):
    rng = np.random.default_rng(n)
    img = Image(rng.integers(0, 256, (n, n)), 8)
    r = forward_dprt(img)
    assert run_fdprt(img)[0] == r
    assert run_ifdprt(r)[0] == img
    for h in front_heights(n):
        assert run_sfdprt(img, h)[0] == r
        assert run_isfdprt(r, h)[0] == img
        assert run_isfdprt(r, h, use_mem_in=True)[0] == img


def expected_cycles(method, n, b, h=None, mem=False):
    nb = clog2(n)
    if method == "fdprt":
        return 2 * n + nb + 1
    if method == "ifdprt":
        return 2 * n + 3 * nb + b + 2
    k = ceil_div(n, h)
    if method == "sfdprt":
        return k * (n + 3 * h + 3) + n + clog2(h) + 1
    return k * (n + h) + clog2(h) + 3 + b + 2 * nb + (n if mem else 0)


@pytest.mark.criterion(4, "simulated cycle totals equal the closed forms")
@pytest.mark.parametrize("n", [3, 5, 7, 11, 17])
def test_criterion_4_cycle_formulas(n):
    b = 8
    img = Image(np.random.default_rng(n).integers(0, 256, (n, n)), b)
    r = forward_dprt(img)
    totals = {("fdprt", None, False): run_fdprt(img)[1].total,
              ("ifdprt", None, False): run_ifdprt(r)[1].total}
    for h in range(2, n + 1):
        totals[("sfdprt", h, False)] = run_sfdprt(img, h)[1].total
        for mem in (False, True):
            totals[("isfdprt", h, mem)] = run_isfdprt(r, h, use_mem_in=mem)[1].total
    for (method, h, mem), total in totals.items():
        assert total == expected_cycles(method, n, b, h, mem) == cycle_model(method, n, b, h, mem)


@pytest.mark.criterion(4, "simulated cycle totals equal the closed forms")
def test_criterion_4_spot_values():
    img = Image(np.random.default_rng(7).integers(0, 256, (7, 7)), 8)
    r = forward_dprt(img)
    assert run_fdprt(img)[1].total == 18
    assert run_sfdprt(img, 2)[1].total == 73
    assert run_ifdprt(r)[1].total == 33
    assert run_isfdprt(r, 2)[1].total == 54


@pytest.mark.criterion(5, "N=251, B=8 reference cycle, flip-flop, RAM and MUX counts")
def test_criterion_5_published_numbers():
    assert cycle_model("fdprt", 251, 8) == 511
    assert cycle_model("systolic", 251, 8) == 63253
    assert resource_model("systolic", 251, 8).total_flipflops == 516096
    assert resource_model("serial", 251, 8).ram_bits == 504008
    assert resource_model("systolic", 251, 8).ram_bits == 1012032
    assert resource_model("sfdprt", 251, 8, 84).ram_bits == 1516040
    assert resource_model("fdprt", 251, 8).mux_count == 1008016
    assert resource_model("sfdprt", 251, 8, 84).mux_count == 506016


@pytest.mark.criterion(6, "speedup in [35, 37] and flip-flop ratio in [0.70, 0.80] at H=84")
def test_criterion_6_ratios():
    speedup = cycle_model("systolic", 251, 8) / cycle_model("sfdprt", 251, 8, 84)
    assert 35 <= speedup <= 37
    ff = resource_model("sfdprt", 251, 8, 84).total_flipflops
    assert 0.70 <= ff / resource_model("systolic", 251, 8).total_flipflops <= 0.80


@pytest.mark.criterion(7, "Pareto front: strip-count rule, falling cycles, brute-force agreement")
@pytest.mark.parametrize("n", [7, 31, 251])
def test_criterion_7_pareto(n):
    pts = pareto_front(n, 8)
    hs = [p.h for p in pts]
    assert all(ceil_div(n, h) < ceil_div(n, h - 1) for h in hs)
    cycles = [p.cycles for p in pts]
    assert all(a > b for a, b in zip(cycles, cycles[1:]))
    brute = [h for h in range(2, (n - 1) // 2 + 1) if ceil_div(n, h) < ceil_div(n, h - 1)]
    assert hs == brute


@pytest.mark.criterion(8, "tree resource anchors for 2 operands and the 4-operand regression")
def test_criterion_8_tree_anchors():
    for b in range(1, 17):
        t = tree_resources(2, b)
        assert (t.a_fa, t.a_ff, t.a_mux) == (b, b + 1, b)
        # same per-tree terms as the H=2 resource row
        row = resource_model("sfdprt", 7, b, 2)
        assert row.adder_tree_flipflops == 7 * (b + 1)
    t = tree_resources(4, 8)
    assert (t.a_fa, t.a_ff, t.a_mux) == (25, 28, 24)
