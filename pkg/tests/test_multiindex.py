"""Multi-index bookkeeping: enumeration order, arithmetic, factorials."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, strategies as st

from fockcalc import multiindex as mi

from conftest import multi_indices


def test_enumerate_upto_graded_order_two_dims():
    got = mi.enumerate_upto(2, 2)
    assert got == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_enumerate_upto_one_dim():
    assert mi.enumerate_upto(1, 3) == [(0,), (1,), (2,), (3,)]


@given(st.integers(min_value=1, max_value=4), st.integers(min_value=0, max_value=6))
def test_count_matches_enumeration_and_binomial(n, k):
    listed = mi.enumerate_upto(n, k)
    assert len(listed) == mi.count_upto(n, k) == math.comb(n + k, n)
    assert len(set(listed)) == len(listed)
    degrees = [mi.degree(a) for a in listed]
    assert degrees == sorted(degrees)
    assert all(mi.degree(a) <= k for a in listed)


@given(multi_indices(3), multi_indices(3))
def test_add_then_subtract_roundtrip(a, b):
    total = mi.add(a, b)
    assert mi.degree(total) == mi.degree(a) + mi.degree(b)
    assert mi.try_subtract(total, b) == a
    assert mi.try_subtract(total, a) == b


@given(multi_indices(2), multi_indices(2))
def test_try_subtract_none_iff_not_dominated(a, b):
    diff = mi.try_subtract(a, b)
    dominated = all(x >= y for x, y in zip(a, b))
    assert (diff is not None) == dominated
    if diff is not None:
        assert mi.add(diff, b) == a


@given(multi_indices(3))
def test_factorial_is_product_of_component_factorials(a):
    assert mi.factorial(a) == math.prod(math.factorial(x) for x in a)


@given(multi_indices(2, max_entry=5), multi_indices(2, max_entry=5))
def test_falling_factorial_matches_quotient(a, steps):
    if all(x >= s for x, s in zip(a, steps)):
        expected = mi.factorial(a) // mi.factorial(mi.try_subtract(a, steps))
        assert mi.falling_factorial(a, steps) == expected
    else:
        with pytest.raises(ValueError):
            mi.falling_factorial(a, steps)


def test_iter_box_is_full_product():
    cap = (2, 1)
    seen = set(mi.iter_box(cap))
    assert seen == {(i, j) for i in range(3) for j in range(2)}


def test_comp_min_componentwise():
    assert mi.comp_min((3, 1), (2, 5)) == (2, 1)


def test_unit_vectors():
    assert mi.unit(3, 1) == (1, 0, 0)
    assert mi.unit(3, 3) == (0, 0, 1)
    with pytest.raises(ValueError):
        mi.unit(2, 3)
    with pytest.raises(ValueError):
        mi.unit(2, 0)


def test_validate_rejects_negatives_and_non_integers():
    with pytest.raises(ValueError):
        mi.validate((1, -1))
    with pytest.raises(ValueError):
        mi.validate((1.5, 0))


def test_enumerate_upto_rejects_bad_dimension():
    with pytest.raises(ValueError):
        mi.enumerate_upto(0, 3)
