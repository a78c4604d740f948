"""Exact symbol calculus: ring axioms, derivatives, heat/sharp/star/bracket
identities, and the combinatorial and moment oracles."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fockcalc import symbolic as sym
from fockcalc.multiindex import enumerate_upto, iter_box
from fockcalc.symbolic import (
    ANTIHOLOMORPHIC,
    HOLOMORPHIC,
    FormalSymbol,
    GR_I,
    GR_ONE,
    GR_ZERO,
    GaussianRational,
)

from conftest import formal_symbols, gaussian_rationals, nonzero_gaussian_rationals


# ----- Gaussian rational field ------------------------------------------------


@given(gaussian_rationals(), gaussian_rationals(), gaussian_rationals())
def test_gaussian_rational_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a
    assert a + GR_ZERO == a
    assert a * GR_ONE == a
    assert a - a == GR_ZERO


@given(nonzero_gaussian_rationals())
def test_gaussian_rational_inverse(a):
    assert a / a == GR_ONE
    assert (GR_ONE / a) * a == GR_ONE


@given(gaussian_rationals(), gaussian_rationals())
def test_conjugation_is_multiplicative(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()
    assert a.conjugate().conjugate() == a


def test_imaginary_unit_squares_to_minus_one():
    assert GR_I * GR_I == GaussianRational.of(-1)
    assert GR_I**4 == GR_ONE


@given(gaussian_rationals(), st.integers(min_value=0, max_value=6))
def test_power_matches_repeated_product(a, k):
    expected = GR_ONE
    for _ in range(k):
        expected = expected * a
    assert a**k == expected


def test_complex_conversion():
    v = GaussianRational.of(Fraction(3, 4), Fraction(-1, 2))
    assert complex(v) == 0.75 - 0.5j


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        GaussianRational.of(0.5)
    with pytest.raises(TypeError):
        FormalSymbol.constant(1, 0.5)


# ----- polynomial ring ----------------------------------------------------------


@given(formal_symbols(n=1), formal_symbols(n=1), formal_symbols(n=1))
def test_symbol_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert f - f == FormalSymbol.zero(1)


@given(formal_symbols(n=2, max_degree=2, max_terms=2))
def test_conjugate_is_an_involution(f):
    assert f.conjugate().conjugate() == f


@given(formal_symbols(n=1, max_degree=3))
def test_derivatives_commute(f):
    d_then_dbar = f.d(1, HOLOMORPHIC).d(1, ANTIHOLOMORPHIC)
    dbar_then_d = f.d(1, ANTIHOLOMORPHIC).d(1, HOLOMORPHIC)
    assert d_then_dbar == dbar_then_d


@given(formal_symbols(n=1, max_degree=2), formal_symbols(n=1, max_degree=2))
def test_derivative_product_rule(f, g):
    lhs = (f * g).d(1, HOLOMORPHIC)
    rhs = f.d(1, HOLOMORPHIC) * g + f * g.d(1, HOLOMORPHIC)
    assert lhs == rhs


@given(formal_symbols(n=1, max_degree=2))
def test_conjugate_swaps_derivative_kind(f):
    assert f.d(1, HOLOMORPHIC).conjugate() == f.conjugate().d(1, ANTIHOLOMORPHIC)


def test_evaluate_on_monomial():
    # (1/2) z^2 zbar at z = 2i: (1/2)(2i)^2(-2i) = (1/2)(-4)(-2i) = 4i
    f = FormalSymbol.monomial(1, (2,), (1,), 0, GaussianRational.of(Fraction(1, 2)))
    assert f.evaluate((2j,), 1.0) == 4j


@given(formal_symbols(n=1, max_degree=2, max_terms=2),
       st.integers(min_value=-2, max_value=2), st.integers(min_value=-2, max_value=2))
def test_shift_is_translation(f, are, aim):
    a = complex(are, aim)
    g = f.shifted((GaussianRational.of(are, aim),))
    for z in (0j, 1 + 1j, -2j):
        assert abs(g.evaluate((z,), 1.0) - f.evaluate((z + a,), 1.0)) < 1e-9


# ----- heat transform -----------------------------------------------------------


def test_heat_transform_known_values():
    z, zb = FormalSymbol.z(1, 1), FormalSymbol.zbar(1, 1)
    t = FormalSymbol.s(1, 2)
    assert sym.heat_transform_formal(z * zb) == z * zb + t
    expected = z * z * zb * zb + (z * zb * t).scaled(GaussianRational.of(4)) \
        + (t * t).scaled(GaussianRational.of(2))
    assert sym.heat_transform_formal(z * z * zb * zb) == expected


def test_heat_transform_fixes_holomorphic_symbols():
    z = FormalSymbol.z(1, 1)
    f = z * z * z
    assert sym.heat_transform_formal(f) == f


def test_heat_semigroup_on_rational_grid():
    # heat_s(heat_t(f)) = heat_{s+t}(f); each side is polynomial in (s, t)
    # of degree <= deg(f) per variable, so equality on a (deg+1)^2 grid of
    # distinct rationals proves the identity.
    rng = random.Random(5150)
    for _ in range(5):
        f = sym.random_polynomial(rng, 1, 4)
        deg = f.total_degree()
        points = [Fraction(j + 1, 7) for j in range(deg + 1)]
        for s in points:
            for t in points:
                twice = sym.heat_transform_formal(
                    sym.heat_transform_formal(f, t_value=t), t_value=s
                )
                once = sym.heat_transform_formal(f, t_value=s + t)
                assert twice == once


# ----- sharp and star products ----------------------------------------------------


def test_sharp_product_lowest_order_corrections():
    z, zb = FormalSymbol.z(1, 1), FormalSymbol.zbar(1, 1)
    t = FormalSymbol.s(1, 2)
    assert sym.sharp_formal(z, zb) == z * zb - t
    assert sym.sharp_formal(zb, z) == zb * z  # no holomorphic derivative of zbar
    assert sym.star_berezin(zb, z) == z * zb + t


@given(formal_symbols(n=1, max_degree=2, max_terms=2),
       formal_symbols(n=1, max_degree=2, max_terms=2),
       formal_symbols(n=1, max_degree=2, max_terms=2))
@settings(max_examples=25)
def test_sharp_is_associative(f, g, h):
    assert sym.sharp_formal(sym.sharp_formal(f, g), h) == sym.sharp_formal(f, sym.sharp_formal(g, h))


@given(formal_symbols(n=1, max_degree=3, max_terms=2),
       formal_symbols(n=1, max_degree=3, max_terms=2))
def test_partial_expansion_terminates_at_sharp(f, g):
    order = f.total_degree() + g.total_degree() + 1
    assert sym.partial_product_expansion(f, g, order) == sym.sharp_formal(f, g)


def test_partial_expansion_order_zero_is_plain_product():
    z, zb = FormalSymbol.z(1, 1), FormalSymbol.zbar(1, 1)
    assert sym.partial_product_expansion(z, zb, 0) == z * zb


# ----- Poisson bracket -------------------------------------------------------------


def test_poisson_bracket_of_coordinates():
    z, zb = FormalSymbol.z(1, 1), FormalSymbol.zbar(1, 1)
    assert sym.poisson_bracket(z, zb) == FormalSymbol.constant(1, GR_I)
    # q = Re z, p = Im z: {p, q} = 1/2
    q = (z + zb).scaled(GaussianRational.of(Fraction(1, 2)))
    p = (z - zb).scaled(GaussianRational.of(0, Fraction(-1, 2)))
    assert sym.poisson_bracket(p, q) == FormalSymbol.constant(
        1, GaussianRational.of(Fraction(1, 2))
    )


@given(formal_symbols(n=1, max_degree=2, max_terms=2),
       formal_symbols(n=1, max_degree=2, max_terms=2))
def test_poisson_bracket_antisymmetry(f, g):
    assert sym.poisson_bracket(f, g) == sym.poisson_bracket(g, f).scaled(
        GaussianRational.of(-1)
    )


# ----- combinatorial identity -------------------------------------------------------


def test_comb_example_value():
    assert sym.comb_closed(1, 2, 1) == sym.comb_sum(1, 2, 1) == 1


@given(st.integers(min_value=0, max_value=9), st.integers(min_value=0, max_value=9),
       st.integers(min_value=0, max_value=9))
def test_comb_sum_equals_closed(p_raw, q_raw, l):
    p, q = min(p_raw, q_raw), max(p_raw, q_raw)
    assert sym.comb_sum(p, q, l) == sym.comb_closed(p, q, l)


def test_comb_rejects_p_greater_than_q():
    with pytest.raises(ValueError):
        sym.comb_sum(3, 2, 1)
    with pytest.raises(ValueError):
        sym.comb_closed(3, 2, 1)


# ----- pairing moments ---------------------------------------------------------------


def test_moment_example_value():
    assert sym.moment_double_closed((1,), (0,), (0,), (1,)) == GaussianRational.of(-1)


def test_moment_delta_constraint():
    # nonzero only when alpha - beta = epsilon - gamma
    assert sym.moment_double_closed((2,), (1,), (0,), (1,)) == GaussianRational.of(
        Fraction(-2)
    )
    assert sym.moment_double_closed((2,), (1,), (1,), (1,)) == GR_ZERO
    assert sym.moment_double_closed((1,), (1,), (2,), (2,)) == GaussianRational.of(2)


@given(st.tuples(*[st.integers(min_value=0, max_value=3)] * 4))
def test_moment_series_matches_closed_one_dim(quad):
    a, b, c, e = ((x,) for x in quad)
    assert sym.moment_double_series(a, b, c, e) == sym.moment_double_closed(a, b, c, e)


@given(st.integers(min_value=0, max_value=2), st.integers(min_value=0, max_value=2),
       st.integers(min_value=0, max_value=2), st.integers(min_value=0, max_value=2))
def test_moment_series_matches_closed_two_dim(a1, b1, c1, e1):
    a, b, c, e = (a1, 1), (b1, 0), (c1, 1), (e1, 2)
    assert sym.moment_double_series(a, b, c, e) == sym.moment_double_closed(a, b, c, e)


# ----- structure helpers ----------------------------------------------------------


def test_t_valuation():
    z, zb = FormalSymbol.z(1, 1), FormalSymbol.zbar(1, 1)
    t = FormalSymbol.s(1, 2)
    assert (z * t + t * t).t_valuation() == 1
    assert FormalSymbol.s(1, 3).t_valuation() == Fraction(3, 2)
    assert FormalSymbol.zero(1).t_valuation() == math.inf
    assert (z + zb).t_valuation() == 0


def test_degrees_and_exponent_envelopes():
    f = FormalSymbol.monomial(1, (3,), (1,), 0, GR_ONE) + FormalSymbol.monomial(
        1, (0,), (2,), 0, GR_I
    )
    assert f.z_degree() == 3
    assert f.zbar_degree() == 2
    assert f.total_degree() == 4
    assert f.max_z_exponent() == (3,)
    assert f.max_zbar_exponent() == (2,)


def test_random_polynomial_is_seeded_and_bounded():
    a = sym.random_polynomial(random.Random(4), 2, 3)
    b = sym.random_polynomial(random.Random(4), 2, 3)
    assert a == b
    assert a.total_degree() <= 3


def test_format_symbol_zero_and_sample():
    assert sym.format_symbol(FormalSymbol.zero(1)) == "0"
    z = FormalSymbol.z(1, 1)
    text = sym.format_symbol(z * z)
    assert "z1^2" in text


def test_substitute_t_requires_even_power():
    odd = FormalSymbol.s(1, 1)
    with pytest.raises(ValueError):
        odd.substitute_t(0.5)
    even = FormalSymbol.s(1, 2)
    assert even.substitute_t(0.5).evaluate((0j,), 1.0) == 0.5
