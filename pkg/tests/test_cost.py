import pytest
from hypothesis import given
from hypothesis import strategies as st

from dprt._validation import is_prime
from dprt.cost import (
    METHODS,
    cycle_model,
    on_front,
    pareto_csv,
    pareto_front,
    resource_model,
    tree_resources,
)
from oracles import ceil_div, clog2, naive_tree

SOME_PRIMES = [3, 5, 7, 11, 13, 17, 31, 61, 127, 251]


@pytest.mark.parametrize(
    "x,b,want", [(2, 8, (8, 9, 8)), (3, 8, (17, 28, 16)), (4, 8, (25, 28, 24))]
)
def test_tree_resources_hand_traces(x, b, want):
    t = tree_resources(x, b)
    assert (t.a_fa, t.a_ff, t.a_mux) == want


@given(st.integers(1, 300), st.integers(1, 24))
def test_tree_resources_match_structural_count(x, b):
    t = tree_resources(x, b)
    assert (t.a_fa, t.a_ff, t.a_mux) == naive_tree(x, b)


@given(st.integers(2, 300), st.integers(1, 24))
def test_tree_has_at_least_one_adder_bit_per_operand_bit(x, b):
    assert tree_resources(x, b).a_fa >= (x - 1) * b


@given(st.integers(1, 300), st.integers(1, 24))
def test_tree_resources_grow_with_operand_count(x, b):
    small, big = tree_resources(x, b), tree_resources(x + 1, b)
    assert big.a_fa > small.a_fa
    assert big.a_mux > small.a_mux
    # flip-flops can stall: a 3-operand tree registers as many bits as a 4-operand one
    assert big.a_ff >= small.a_ff


def test_flip_flops_are_not_strictly_increasing():
    assert tree_resources(3, 8).a_ff == tree_resources(4, 8).a_ff


def test_single_operand_tree_is_free():
    t = tree_resources(1, 8)
    assert (t.a_fa, t.a_ff, t.a_mux) == (0, 0, 0)


@pytest.mark.parametrize("b", range(1, 17))
def test_two_operand_anchor(b):
    t = tree_resources(2, b)
    assert (t.a_fa, t.a_ff, t.a_mux) == (b, b + 1, b)


def test_tree_resources_reject_empty_trees():
    with pytest.raises(ValueError):
        tree_resources(0, 8)


def test_84_operand_tree_flip_flops():
    assert tree_resources(84, 8).a_ff == 863


@pytest.mark.parametrize(
    "args,want",
    [
        (("systolic", 251), 63253),
        (("fdprt", 251), 511),
        (("sfdprt", 251, 8, 2), 33013),
        (("sfdprt", 251, 8, 84), 1777),
        (("ifdprt", 251, 8), 536),
        (("fdprt", 7), 18),
        (("sfdprt", 7, 8, 2), 73),
        (("ifdprt", 7, 8), 33),
        (("isfdprt", 7, 8, 2), 54),
        (("serial", 7), 7**3 + 2 * 49 + 7),
    ],
)
def test_cycle_model_values(args, want):
    assert cycle_model(*args) == want


def test_memory_buffer_adds_n_cycles_to_scalable_inverse():
    assert cycle_model("isfdprt", 7, 8, 2, use_mem_in=True) == 61
    assert cycle_model("sfdprt", 7, 8, 2, use_mem_in=True) == 73


@pytest.mark.parametrize("n", SOME_PRIMES)
def test_general_rows_reduce_to_the_special_cases(n):
    nb = clog2(n)
    for b in (4, 8, 12):
        assert cycle_model("sfdprt", n, b, 2) == ceil_div(n, 2) * (n + 9) + n + 2
        assert cycle_model("sfdprt", n, b, n) == 5 * n + nb + 4
        assert cycle_model("isfdprt", n, b, 2) == ceil_div(n, 2) * (n + 2) + b + 2 * nb + 4
        assert cycle_model("isfdprt", n, b, n) == 2 * n + 3 * nb + b + 3
        h2 = resource_model("sfdprt", n, b, 2)
        assert h2.register_array_bits == 2 * n * b
        assert h2.adder_tree_flipflops == n * (b + 1)
        assert h2.one_bit_additions == n * b + n * (b + nb)
        assert h2.mux_count == 2 * n * tree_resources(ceil_div(n, 2) + 1, b).a_mux
        hn = resource_model("sfdprt", n, b, n)
        assert hn.mux_count == n * n * b
        ih2 = resource_model("isfdprt", n, b, 2)
        assert ih2.adder_tree_flipflops == (n + 1) * (b + nb + 1) + 3 * n * (b + 2 * nb)
        assert ih2.one_bit_additions == (n + 1) * (b + nb) + 2 * n * (b + 2 * nb)
        assert resource_model("isfdprt", n, b, n).mux_count == n * n * (b + nb)


def test_scalable_methods_need_a_height():
    with pytest.raises(ValueError):
        cycle_model("sfdprt", 7)
    with pytest.raises(ValueError):
        resource_model("isfdprt", 7, 8)
    with pytest.raises(ValueError):
        cycle_model("sfdprt", 7, 8, 9)


def test_unknown_method_and_non_prime_size():
    with pytest.raises(ValueError):
        cycle_model("magic", 7)
    with pytest.raises(ValueError):
        resource_model("fdprt", 9)


def test_systolic_flip_flops_at_251():
    r = resource_model("systolic", 251, 8)
    assert r.register_array_bits == 251 * 252 * 8
    assert r.adder_tree_flipflops == 252 * (3 * 8 + 2 * 8)
    assert r.total_flipflops == 516096


@pytest.mark.parametrize(
    "method,h,field,want",
    [
        ("serial", None, "ram_bits", 504008),
        ("systolic", None, "ram_bits", 1012032),
        ("sfdprt", 2, "ram_bits", 1516040),
        ("sfdprt", 84, "ram_bits", 1516040),
        ("sfdprt", 251, "ram_bits", 1516040),
        ("fdprt", None, "mux_count", 1008016),
        ("sfdprt", 84, "mux_count", 506016),
        ("fdprt", None, "ram_bits", 0),
    ],
)
def test_ram_and_mux_totals_at_251(method, h, field, want):
    assert getattr(resource_model(method, 251, 8, h), field) == want


def test_sfdprt_84_mux_decomposition():
    assert tree_resources(4, 8).a_mux == 24
    assert 251 * 84 * 24 == 506016


def test_baseline_muxes_are_unknown():
    assert resource_model("serial", 251, 8).mux_count is None
    assert resource_model("systolic", 251, 8).mux_count is None


def test_dividers_only_in_inverse_architectures():
    for m in ("serial", "systolic", "fdprt"):
        assert resource_model(m, 7, 8).divider_count == 0
    r = resource_model("ifdprt", 7, 8)
    w = 8 + 2 * 3
    assert r.divider_count == 7
    assert r.divider_flipflops == 7 * 3 * w * w
    assert r.total_flipflops == r.register_array_bits + r.adder_tree_flipflops + r.divider_flipflops


@pytest.mark.parametrize("method", METHODS)
def test_resource_counts_are_non_negative_integers(method):
    h = 5 if method in ("sfdprt", "isfdprt") else None
    d = resource_model(method, 13, 8, h).to_dict()
    for key, val in d.items():
        if key in ("method", "h") or val is None:
            continue
        assert isinstance(val, int) and val >= 0, key


def test_speedup_and_flip_flop_ratio_at_251():
    speed = cycle_model("systolic", 251) / cycle_model("sfdprt", 251, 8, 84)
    assert 35 <= speed <= 37
    ratio = (
        resource_model("sfdprt", 251, 8, 84).total_flipflops
        / resource_model("systolic", 251, 8).total_flipflops
    )
    assert 0.70 <= ratio <= 0.80
    assert resource_model("sfdprt", 251, 8, 84).total_flipflops == 385285


def brute_force_front(n):
    return [h for h in range(2, (n - 1) // 2 + 1) if ceil_div(n, h) < ceil_div(n, h - 1)]


@pytest.mark.parametrize("n", [p for p in range(2, 400) if is_prime(p)])
def test_front_equals_brute_force_filter(n):
    pts = pareto_front(n)
    assert [p.h for p in pts] == brute_force_front(n)
    for p in pts:
        assert on_front(n, p.h)
        assert p.k == ceil_div(n, p.h)
    cycles = [p.cycles for p in pts]
    assert all(a > b for a, b in zip(cycles, cycles[1:]))


@pytest.mark.parametrize("n,want", [(7, [2, 3]), (5, [2]), (3, []), (2, [])])
def test_small_fronts(n, want):
    assert [p.h for p in pareto_front(n)] == want


def test_front_at_251_contains_84():
    hs = [p.h for p in pareto_front(251)]
    assert 84 in hs and 83 not in hs


def test_inverse_costing_flag():
    fwd = pareto_front(7)
    inv = pareto_front(7, inverse=True)
    assert [p.h for p in fwd] == [p.h for p in inv]
    assert all(p.resources.method == "isfdprt" for p in inv)
    assert inv[0].cycles == cycle_model("isfdprt", 7, 8, 2)


def test_pareto_csv_layout():
    lines = pareto_csv(5).splitlines()
    assert lines[0] == "method,H,K,cycles,flipflops,adders,ram_bits,muxes"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["sfdprt", "serial", "systolic", "fdprt"]
    assert lines[2].endswith(",")  # unknown serial MUX count stays empty
