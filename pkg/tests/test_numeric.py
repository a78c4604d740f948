"""Quadrature rules, sampled symbols, heat transform, and pairing integrals."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fockcalc import numeric, symbolic
from fockcalc.numeric import (
    QuadratureSampleError,
    SampledSymbol,
    complex_exponential,
    cos_re,
    gauss_hermite,
    gaussian_bump,
    heat_numeric,
    moment_double_quadrature,
    sampled_from_formal,
    sampled_product,
    sharp_integral_numeric,
    sin_im,
    tensor_nodes,
)
from fockcalc.symbolic import FormalSymbol, GaussianRational


def hermite_moment(d: int) -> float:
    """Closed form for integral of x^d e^{-x^2} dx over the real line."""
    if d % 2 == 1:
        return 0.0
    return math.gamma((d + 1) / 2)


# ----- quadrature rules -----------------------------------------------------------


def test_weights_sum_to_sqrt_pi():
    for order in (1, 2, 7, 40, 200):
        rule = gauss_hermite(order)
        assert abs(rule.weights.sum() - math.sqrt(math.pi)) < 1e-12


def test_moments_exact_through_design_degree():
    for order in range(1, 13):
        rule = gauss_hermite(order)
        for d in range(2 * order):
            got = float(np.sum(rule.weights * rule.nodes**d))
            want = hermite_moment(d)
            scale = max(abs(want), 1.0)
            assert abs(got - want) <= 1e-12 * scale, (order, d)


def test_rule_order_bounds():
    with pytest.raises(ValueError):
        gauss_hermite(0)
    with pytest.raises(ValueError):
        gauss_hermite(201)


def test_tensor_nodes_shapes():
    rule = gauss_hermite(5)
    pts, logw = tensor_nodes(rule, 2)
    assert pts.shape == (2, 5**4)
    assert logw.shape == (5**4,)
    # total weight = pi^n for the complex Gaussian in these coordinates
    assert abs(np.exp(logw).sum() - math.pi**2) < 1e-10


# ----- sampled symbols -------------------------------------------------------------


def test_values_broadcasts_scalars():
    const = numeric.sampled_constant(2, 3.5 + 1j)
    pts = np.zeros((2, 7), dtype=complex)
    vals = const.values(pts)
    assert vals.shape == (7,)
    assert np.allclose(vals, 3.5 + 1j)


def test_dimension_mismatch_rejected():
    f = cos_re(1)
    with pytest.raises(ValueError):
        f.values(np.zeros((2, 4), dtype=complex))
    with pytest.raises(ValueError):
        f.derivative_symbol((1, 0), (0, 0))


def test_finite_difference_matches_analytic_first_order():
    analytic = cos_re(1)
    fd_only = SampledSymbol(n=1, value=analytic.value, derivative=None, label="fd")
    z = (0.6 - 0.4j,)
    for hol, anti in [((1,), (0,)), ((0,), (1,)), ((1,), (1,))]:
        a = analytic.derivative_symbol(hol, anti).at_point(z)
        b = fd_only.derivative_symbol(hol, anti).at_point(z)
        assert abs(a - b) < 1e-8, (hol, anti)


def test_finite_difference_order_cap():
    fd_only = SampledSymbol(n=1, value=cos_re(1).value, derivative=None)
    with pytest.raises(ValueError):
        fd_only.derivative_symbol((2,), (1,))


def test_exponential_family_derivatives():
    # exp(i(a x + b y)) has Wirtinger derivatives with explicit multipliers;
    # check against finite differences of the value itself.
    f = complex_exponential(1, (0.7,), (-0.3,))
    fd_only = SampledSymbol(n=1, value=f.value, derivative=None)
    z = (0.2 + 0.9j,)
    for hol, anti in [((1,), (0,)), ((0,), (1,)), ((2,), (0,)), ((1,), (1,))]:
        a = f.derivative_symbol(hol, anti).at_point(z)
        if sum(hol) + sum(anti) <= 2:
            b = fd_only.derivative_symbol(hol, anti).at_point(z)
            assert abs(a - b) < 1e-7, (hol, anti)


def test_trig_families_match_exponential_combinations():
    z = (0.4 + 0.25j,)
    c = cos_re(1)
    s = sin_im(1)
    ep = complex_exponential(1, (1.0,), (0.0,))
    em = complex_exponential(1, (-1.0,), (0.0,))
    assert abs(c.at_point(z) - 0.5 * (ep.at_point(z) + em.at_point(z))) < 1e-14
    fp = complex_exponential(1, (0.0,), (1.0,))
    fm = complex_exponential(1, (0.0,), (-1.0,))
    assert abs(s.at_point(z) - (-0.5j) * (fp.at_point(z) - fm.at_point(z))) < 1e-14


def test_gaussian_bump_value_and_derivative():
    center = (0.3 + 0.1j,)
    bump = gaussian_bump(1, center, 0.8)
    z = (0.9 - 0.2j,)
    w = z[0] - center[0]
    assert abs(bump.at_point(z) - math.exp(-0.8 * abs(w) ** 2)) < 1e-14
    fd_only = SampledSymbol(n=1, value=bump.value, derivative=None)
    for hol, anti in [((1,), (0,)), ((0,), (1,)), ((1,), (1,)), ((2,), (0,))]:
        a = bump.derivative_symbol(hol, anti).at_point(z)
        if sum(hol) + sum(anti) <= 2:
            b = fd_only.derivative_symbol(hol, anti).at_point(z)
            assert abs(a - b) < 1e-6, (hol, anti)


def test_sampled_from_formal_matches_evaluate(rng):
    for _ in range(10):
        f = symbolic.random_polynomial(rng, 2, 3)
        fs = sampled_from_formal(f)
        z = (complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
             complex(rng.uniform(-1, 1), rng.uniform(-1, 1)))
        assert abs(fs.at_point(z) - f.evaluate(z, 1.0)) < 1e-12
        d = fs.derivative_symbol((1, 0), (0, 1)).at_point(z)
        from fockcalc.symbolic import ANTIHOLOMORPHIC, HOLOMORPHIC

        expected = f.differentiate((1, 0), HOLOMORPHIC).differentiate(
            (0, 1), ANTIHOLOMORPHIC
        ).evaluate(z, 1.0)
        assert abs(d - expected) < 1e-12


def test_sampled_from_formal_rejects_weight_powers():
    f = FormalSymbol.s(1, 2)
    with pytest.raises(ValueError):
        sampled_from_formal(f)


def test_sampled_product_derivative_uses_leibniz():
    f = cos_re(1)
    g = sin_im(1)
    prod = sampled_product(f, g)
    z = (0.5 + 0.3j,)
    got = prod.derivative_symbol((1,), (1,)).at_point(z)
    # Leibniz by hand over the four splittings
    want = (
        f.derivative_symbol((1,), (1,)).at_point(z) * g.at_point(z)
        + f.derivative_symbol((1,), (0,)).at_point(z) * g.derivative_symbol((0,), (1,)).at_point(z)
        + f.derivative_symbol((0,), (1,)).at_point(z) * g.derivative_symbol((1,), (0,)).at_point(z)
        + f.at_point(z) * g.derivative_symbol((1,), (1,)).at_point(z)
    )
    assert abs(got - want) < 1e-13


# ----- heat transform ---------------------------------------------------------------


def test_heat_numeric_known_values():
    rule = gauss_hermite(40)
    zz = sampled_from_formal(FormalSymbol.z(1, 1) * FormalSymbol.zbar(1, 1))
    for t in (0.25, 0.7):
        got = heat_numeric(zz, (0j,), t, rule)
        assert abs(got - t) < 1e-12
    f = cos_re(1)
    for t in (0.2, 0.05):
        got = heat_numeric(f, (0j,), t, rule)
        assert abs(got - math.exp(-t / 4)) < 1e-12


def test_heat_numeric_translation_structure():
    # heat(cos(Re z))(x real) = e^{-t/4} cos(x)
    rule = gauss_hermite(40)
    f = cos_re(1)
    got = heat_numeric(f, (0.8 + 0j,), 0.3, rule)
    assert abs(got - math.exp(-0.3 / 4) * math.cos(0.8)) < 1e-12


def test_heat_numeric_flags_bad_samples():
    def value(X):
        out = np.ones(X.shape[1], dtype=complex)
        out[0] = np.nan
        return out

    bad = SampledSymbol(n=1, value=value, label="bad")
    with pytest.raises(QuadratureSampleError):
        heat_numeric(bad, (0j,), 0.5, gauss_hermite(10))


def test_heat_numeric_matches_formal_on_polynomials(rng):
    rule = gauss_hermite(30)
    for _ in range(5):
        f = symbolic.random_polynomial(rng, 1, 4)
        hf = symbolic.heat_transform_formal(f)
        fs = sampled_from_formal(f)
        for t in (0.25, 1.0):
            for z in (0j, 0.5 - 0.5j):
                got = heat_numeric(fs, (z,), t, rule)
                want = hf.evaluate((z,), t)
                assert abs(got - want) < 1e-10


# ----- pairing integrals --------------------------------------------------------------


def test_sharp_integral_reproduces_sharp_of_heats():
    rule = gauss_hermite(24)
    z1, zb1 = FormalSymbol.z(1, 1), FormalSymbol.zbar(1, 1)
    fs = sampled_from_formal(z1)
    gs = sampled_from_formal(zb1)
    # sharp(heat z, heat zbar) = z zbar - t; at z = 0 the integral is -t
    for t in (0.3, 0.8):
        got = sharp_integral_numeric(fs, gs, (0j,), t, rule)
        assert abs(got - (-t)) < 1e-12


@given(st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3),
       st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3))
@settings(max_examples=30)
def test_moment_quadrature_matches_closed(a, b, c, e):
    rule = gauss_hermite(30)
    got = moment_double_quadrature((a,), (b,), (c,), (e,), rule)
    want = complex(symbolic.moment_double_closed((a,), (b,), (c,), (e,)))
    assert abs(got - want) <= 1e-6 * max(1.0, abs(want))


def test_quadrature_stability_under_order_doubling():
    f = cos_re(1)
    a = heat_numeric(f, (0.3 + 0.4j,), 0.5, gauss_hermite(30))
    b = heat_numeric(f, (0.3 + 0.4j,), 0.5, gauss_hermite(60))
    assert abs(a - b) < 1e-12
