"""
Complex Gamma, complex-order Bessel J and the t e^{it^2} J_nu(t^2) integrals,
checked against scipy.special where scipy covers the case.
"""

import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from hstationary_lab.errors import ConvergenceError, DomainError, PoleError
from hstationary_lab.specfun import (
    SeriesPolicy, bessel_j, bessel_j_array, fresnel_bessel_integral, fresnel_bessel_series, gamma_complex,
    reciprocal_gamma, romberg_integral,
)

complex_strategy = st.tuples(
    st.floats(min_value=-4.5, max_value=6.0, allow_nan=False),
    st.floats(min_value=-3.0, max_value=3.0, allow_nan=False),
).map(lambda t: complex(*t)).filter(lambda z: abs(z.imag) > 0.05 or abs(z.real - round(z.real)) > 0.05)

order_strategy = st.floats(min_value=-0.9, max_value=4.0, allow_nan=False)
argument_strategy = st.floats(min_value=0.05, max_value=8.0, allow_nan=False)


class TestGamma:

    @given(z=complex_strategy)
    @settings(max_examples=60, deadline=None)
    def test_matches_scipy(self, z):
        expected = special.gamma(z)
        assert gamma_complex(z) == pytest.approx(expected, rel=1e-10)

    @given(z=complex_strategy)
    @settings(max_examples=40, deadline=None)
    def test_recurrence(self, z):
        assert gamma_complex(z + 1) == pytest.approx(z * gamma_complex(z), rel=1e-10)

    def test_known_values(self):
        assert gamma_complex(0.5) == pytest.approx(cmath.sqrt(cmath.pi), rel=1e-13)
        assert gamma_complex(5) == pytest.approx(24.0, rel=1e-13)

    def test_poles(self):
        with pytest.raises(PoleError):
            gamma_complex(-2)
        assert reciprocal_gamma(0) == 0
        assert reciprocal_gamma(-3) == 0


class TestBessel:

    @given(nu=order_strategy, x=argument_strategy)
    @settings(max_examples=60, deadline=None)
    def test_real_order_matches_scipy(self, nu, x):
        value, _ = bessel_j(nu, x)
        assert value == pytest.approx(special.jv(nu, x), abs=1e-11)

    def test_complex_argument_matches_scipy(self):
        z = 1.3 + 0.7j
        value, err = bessel_j(1.5, z)
        assert value == pytest.approx(special.jv(1.5, z), abs=1e-12)
        assert err < 1e-14

    @given(re=st.floats(min_value=-0.5, max_value=2.0), im=st.floats(min_value=-2.0, max_value=2.0),
           x=st.floats(min_value=0.2, max_value=6.0))
    @settings(max_examples=40, deadline=None)
    def test_complex_order_recurrence(self, re, im, x):
        """J_{nu-1} + J_{nu+1} = (2 nu / x) J_nu"""
        nu = complex(re, im)
        values = [bessel_j(nu + shift, x)[0] for shift in (-1, 0, 1)]
        assert values[0] + values[2] == pytest.approx(2.0 * nu / x * values[1], rel=1e-8, abs=1e-10)

    def test_negative_integer_order(self):
        value, _ = bessel_j(-2, 1.7)
        assert value == pytest.approx(special.jv(2, 1.7), abs=1e-13)

    def test_array_form(self):
        z = np.linspace(0.1, 3.0, 7)
        values, errors = bessel_j_array(0.25, z)
        np.testing.assert_allclose(values, special.jv(0.25, z), atol=1e-12)
        assert errors.shape == z.shape

    def test_zero_argument_with_nonpositive_order(self):
        with pytest.raises(DomainError):
            bessel_j(-0.5, 0.0)
        assert bessel_j(0, 0.0)[0] == pytest.approx(1.0)

    def test_truncation_budget(self):
        with pytest.raises(ConvergenceError):
            bessel_j(0.5, 30.0, SeriesPolicy(max_terms=5))


class TestIntegrals:

    def test_romberg_exponential(self):
        assert romberg_integral(np.exp, 0.0, 1.0).real == pytest.approx(np.e - 1.0, abs=1e-12)

    @pytest.mark.parametrize("nu", [0.5, (1 - 1j) / 2, (1 + 1j) / 2, -0.5 - 0.5j])
    def test_quadrature_matches_series(self, nu):
        r = 1.4
        quad = fresnel_bessel_integral(nu, r, tol=1e-11)
        series = fresnel_bessel_series(nu, r)
        assert abs(quad - series) < 1e-8

    def test_series_derivative_is_integrand(self):
        nu, r, h = 0.5 - 0.5j, 1.1, 1e-4
        derivative = (fresnel_bessel_series(nu, r + h) - fresnel_bessel_series(nu, r - h)) / (2 * h)
        t = r * r
        expected = r * np.exp(1j * t) * bessel_j(nu, t)[0]
        assert abs(derivative - expected) < 1e-6

    def test_series_vanishes_at_zero(self):
        assert fresnel_bessel_series(0.5, 0.0) == 0

    def test_non_integrable_order(self):
        with pytest.raises(DomainError):
            fresnel_bessel_integral(-1.5, 1.0)
        with pytest.raises(DomainError):
            fresnel_bessel_series(-1.0 + 0.5j, 1.0)


class TestClosedForms:

    @pytest.mark.parametrize("z", [0.5, 1.0, 2.5, 5.0, 7.5, 10.0])
    def test_half_order(self, z):
        value, _ = bessel_j(0.5, z)
        assert abs(value - np.sqrt(2.0 / (np.pi * z)) * np.sin(z)) < 1e-10

    @given(z=complex_strategy)
    @settings(max_examples=40, deadline=None)
    def test_reflection(self, z):
        """Gamma(z) Gamma(1 - z) = pi / sin(pi z)"""
        assert gamma_complex(z) * gamma_complex(1 - z) == pytest.approx(cmath.pi / cmath.sin(cmath.pi * z), rel=1e-10)
