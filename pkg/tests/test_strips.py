import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import images
from dprt.core import Image, InvalidRadonArray, RadonArray, forward_dprt, inverse_dprt
from dprt.strips import (
    accumulate_partials,
    combine_partial_idprt,
    make_strip_plan,
    partial_dprt,
    partial_idprt,
    strip_dprt,
    strip_idprt,
)
from oracles import ceil_div, clog2, naive_partial_dprt


@given(st.sampled_from([2, 3, 5, 7, 11, 13, 17, 31, 251]), st.data())
def test_plan_covers_every_row_once(n, data):
    h = data.draw(st.integers(2, n))
    plan = make_strip_plan(n, h)
    assert plan.k == ceil_div(n, h)
    assert sum(plan.lengths) == n
    assert all(L == h for L in plan.lengths[:-1])
    assert 1 <= plan.lengths[-1] <= h
    rows = [i for r in range(plan.k) for i in plan.rows(r)]
    assert rows == list(range(n))
    assert plan.h_lat == clog2(h)


def test_plan_for_seven_rows_in_strips_of_two():
    plan = make_strip_plan(7, 2)
    assert (plan.k, plan.lengths) == (4, (2, 2, 2, 1))


@pytest.mark.parametrize("h", [0, 1, 8])
def test_plan_rejects_heights_outside_range(h):
    with pytest.raises(ValueError):
        make_strip_plan(7, h)


def test_plan_rejects_non_prime():
    with pytest.raises(ValueError):
        make_strip_plan(9, 3)


def test_strip_index_is_checked():
    plan = make_strip_plan(7, 2)
    with pytest.raises(ValueError):
        plan.rows(4)


@given(images(primes=(3, 5, 7, 11)), st.data())
@settings(max_examples=40, deadline=None)
def test_partials_match_oracle(img, data):
    h = data.draw(st.integers(2, img.n))
    plan = make_strip_plan(img.n, h)
    r = data.draw(st.integers(0, plan.k - 1))
    part = partial_dprt(img, plan, r)
    assert part.values.tolist() == naive_partial_dprt(img.pixels.tolist(), list(plan.rows(r)))


@given(images(), st.data())
@settings(max_examples=60, deadline=None)
def test_accumulated_partials_equal_full_transform(img, data):
    h = data.draw(st.integers(2, img.n))
    assert strip_dprt(img, h) == forward_dprt(img)


@given(images(), st.data())
@settings(max_examples=60, deadline=None)
def test_combined_partial_inverse_recovers_image(img, data):
    h = data.draw(st.integers(2, img.n))
    assert strip_idprt(forward_dprt(img), h) == img


def test_partial_inverse_sum_is_backprojection(rng):
    img = Image(rng.integers(0, 256, (7, 7)), 8)
    r = forward_dprt(img)
    plan = make_strip_plan(7, 3)
    z = sum(partial_idprt(r, plan, k).values for k in range(plan.k))
    n = 7
    num = z + r.values[n][:, None] - r.values[0].sum()
    assert np.array_equal(num // n, img.pixels)


def test_partials_must_cover_every_strip(rng):
    img = Image(rng.integers(0, 16, (7, 7)), 4)
    plan = make_strip_plan(7, 2)
    parts = [partial_dprt(img, plan, r) for r in range(plan.k)]
    with pytest.raises(ValueError, match="cover"):
        accumulate_partials(parts[:-1])
    with pytest.raises(ValueError, match="cover"):
        accumulate_partials(parts + parts[:1])
    with pytest.raises(ValueError):
        accumulate_partials([])


def test_partials_from_mixed_plans_are_rejected(rng):
    img = Image(rng.integers(0, 16, (7, 7)), 4)
    a, b = make_strip_plan(7, 2), make_strip_plan(7, 3)
    with pytest.raises(ValueError):
        accumulate_partials([partial_dprt(img, a, 0), partial_dprt(img, b, 1), partial_dprt(img, b, 2)])


def test_partial_width_grows_with_strip_height():
    img = Image(np.full((7, 7), 255), 8)
    plan = make_strip_plan(7, 2)
    part = partial_dprt(img, plan, 0)
    assert part.values.max() == 2 * 255
    last = partial_dprt(img, plan, plan.k - 1)
    assert last.values.max() == 255


def test_plan_and_data_size_must_agree(rng):
    img = Image(rng.integers(0, 16, (5, 5)), 4)
    with pytest.raises(ValueError):
        partial_dprt(img, make_strip_plan(7, 2), 0)


def test_strip_inverse_validates_like_the_direct_inverse(example_image):
    vals = forward_dprt(example_image).values.copy()
    vals[1, 2] += 1
    bad = RadonArray(vals, 4)
    for h in (2, 3):
        with pytest.raises(InvalidRadonArray):
            strip_idprt(bad, h)
    with pytest.raises(InvalidRadonArray):
        inverse_dprt(bad)


def test_combine_uses_given_partials(rng):
    img = Image(rng.integers(0, 256, (11, 11)), 8)
    r = forward_dprt(img)
    plan = make_strip_plan(11, 4)
    parts = [partial_idprt(r, plan, k) for k in reversed(range(plan.k))]
    assert combine_partial_idprt(parts, r) == img
