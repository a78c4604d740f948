"""Shared fixtures and hypothesis strategies for the test suite."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from fockcalc.symbolic import FormalSymbol, GaussianRational

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    max_examples=60,
)
settings.load_profile("suite")


# ----- strategies ----------------------------------------------------------------

small_fractions = st.fractions(
    min_value=Fraction(-4), max_value=Fraction(4), max_denominator=4
)


@st.composite
def gaussian_rationals(draw) -> GaussianRational:
    return GaussianRational.of(draw(small_fractions), draw(small_fractions))


@st.composite
def nonzero_gaussian_rationals(draw) -> GaussianRational:
    value = draw(gaussian_rationals())
    if value.is_zero():
        return GaussianRational.of(1)
    return value


def multi_indices(n: int, max_entry: int = 3):
    return st.tuples(*[st.integers(min_value=0, max_value=max_entry) for _ in range(n)])


@st.composite
def formal_symbols(draw, n: int = 1, max_degree: int = 2, max_terms: int = 3) -> FormalSymbol:
    symbol = FormalSymbol.zero(n)
    count = draw(st.integers(min_value=0, max_value=max_terms))
    for _ in range(count):
        ze = draw(multi_indices(n, max_degree))
        zb = draw(multi_indices(n, max_degree))
        coeff = draw(gaussian_rationals())
        symbol = symbol + FormalSymbol.monomial(n, ze, zb, 0, coeff)
    return symbol


@pytest.fixture
def rng():
    import random

    return random.Random(987654321)
