"""
Ambient model algebra: quadrics, Hermitian products, horizontal projection.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hstationary_lab.ambient import (
    AmbientModel, CVector, ModelKind, Signature, herm_inner, horizontal_project, kaehler_form,
    legendrian_residuals, quadric_residual,
)
from hstationary_lab.errors import DimensionError, UnsupportedModelError


# ============================================================
# Strategies
# ============================================================

angle_strategy = st.floats(min_value=-np.pi, max_value=np.pi, allow_nan=False, allow_infinity=False)
coordinate_strategy = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)
complex_vector_strategy = st.lists(
    st.tuples(coordinate_strategy, coordinate_strategy), min_size=3, max_size=3
).map(lambda pairs: np.array([complex(a, b) for a, b in pairs]))


class TestModels:

    def test_dimensions(self):
        flat = AmbientModel.flat(3)
        sphere = AmbientModel.spherical(2)
        ads = AmbientModel.hyperbolic(2)
        assert (flat.m, flat.epsilon, flat.is_lift) == (3, 0, False)
        assert (sphere.m, sphere.epsilon, sphere.is_lift) == (3, 1, True)
        assert (ads.m, ads.epsilon) == (3, -1)
        assert ads.kind is ModelKind.HYPERBOLIC
        assert list(ads.signs) == [-1.0, 1.0, 1.0]
        assert ads.holomorphic_curvature == -4.0

    def test_labels(self):
        assert AmbientModel.flat(2).label() == "C2"
        assert AmbientModel.spherical(3).label() == "CP3"
        assert AmbientModel.hyperbolic(2).label() == "CH2"

    def test_invalid_dimension(self):
        with pytest.raises(DimensionError):
            AmbientModel.flat(0)

    def test_invalid_signature(self):
        with pytest.raises(DimensionError):
            Signature((1, 2))
        with pytest.raises(DimensionError):
            CVector(np.zeros(3), Signature.euclidean(2))

    def test_flat_has_no_quadric(self):
        z = CVector(np.ones(2), Signature.euclidean(2))
        with pytest.raises(UnsupportedModelError):
            quadric_residual(z, AmbientModel.flat(2))


class TestQuadrics:

    @given(t=angle_strategy, s=angle_strategy)
    @settings(max_examples=50, deadline=None)
    def test_sphere_points(self, t, s):
        model = AmbientModel.spherical(1)
        z = CVector(np.array([np.cos(t), np.sin(t) * np.exp(1j * s)]), model.signature)
        assert quadric_residual(z, model) < 1e-12

    @given(t=st.floats(min_value=-2.0, max_value=2.0), s=angle_strategy)
    @settings(max_examples=50, deadline=None)
    def test_anti_de_sitter_points(self, t, s):
        model = AmbientModel.hyperbolic(1)
        z = CVector(np.array([np.cosh(t) * np.exp(1j * s), np.sinh(t)]), model.signature)
        assert quadric_residual(z, model) < 1e-10

    def test_off_quadric(self):
        model = AmbientModel.spherical(1)
        z = CVector(np.array([2.0, 0.0]), model.signature)
        assert quadric_residual(z, model) == pytest.approx(3.0)


class TestHermitianAlgebra:

    @given(u=complex_vector_strategy)
    @settings(max_examples=50, deadline=None)
    def test_kaehler_form_of_rotated_vector(self, u):
        """omega(u, iu) = |u|^2 in the Euclidean signature."""
        sig = Signature.euclidean(3)
        v = CVector(u, sig)
        assert kaehler_form(v, v.scaled(1j)) == pytest.approx(herm_inner(v, v).real, abs=1e-9)

    @given(u=complex_vector_strategy)
    @settings(max_examples=50, deadline=None)
    def test_kaehler_form_is_antisymmetric(self, u):
        sig = Signature.lorentzian(3)
        a = CVector(u, sig)
        b = CVector(np.roll(u, 1) + 0.5j, sig)
        assert kaehler_form(a, b) == pytest.approx(-kaehler_form(b, a), abs=1e-9)

    @given(u=complex_vector_strategy, t=angle_strategy, s=angle_strategy)
    @settings(max_examples=50, deadline=None)
    def test_horizontal_projection(self, u, t, s):
        model = AmbientModel.spherical(2)
        z = CVector(np.array([np.cos(t), np.sin(t) * np.cos(s), np.sin(t) * np.sin(s) * 1j]), model.signature)
        h = horizontal_project(CVector(u, model.signature), z, model)
        assert abs(herm_inner(h, z)) < 1e-9

    def test_mismatched_signatures(self):
        a = CVector(np.ones(2), Signature.euclidean(2))
        b = CVector(np.ones(2), Signature.lorentzian(2))
        with pytest.raises(DimensionError):
            herm_inner(a, b)


class TestLegendrian:

    def test_clifford_torus_lift(self):
        """(e^{ix}, e^{iy}, e^{-i(x+y)})/sqrt3 is a Legendrian lift into S^5."""
        model = AmbientModel.spherical(2)
        x, y = 0.4, -1.1
        z = np.array([np.exp(1j * x), np.exp(1j * y), np.exp(-1j * (x + y))]) / np.sqrt(3.0)
        dx = np.array([1j * z[0], 0.0, -1j * z[2]])
        dy = np.array([0.0, 1j * z[1], -1j * z[2]])
        tangents = [CVector(dx, model.signature), CVector(dy, model.signature)]
        contact, isotropy = legendrian_residuals(CVector(z, model.signature), tangents, model)
        assert quadric_residual(CVector(z, model.signature), model) < 1e-14
        assert contact < 1e-14
        assert isotropy < 1e-14

    def test_non_horizontal_tangent(self):
        model = AmbientModel.spherical(1)
        z = np.array([1.0, 0.0])
        contact, _ = legendrian_residuals(CVector(z, model.signature), [CVector(1j * z, model.signature)], model)
        assert contact == pytest.approx(1.0)
