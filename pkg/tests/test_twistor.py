"""
Twistor solutions: PDE residuals, scaling transforms, lift systems.
"""

from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hstationary_lab.catalog import instantiate
from hstationary_lab.errors import AdmissibilityError, DimensionError, FamilyNotFoundError
from hstationary_lab.grids import GridSpec
from hstationary_lab.jets import evaluate_jet
from hstationary_lab.twistor import (
    CURVATURE, HSTATIONARY, TWISTED_CLOSED, ScaleMode, TwistorSolution, build_solution, curvature_residual,
    divergence_form_residual, flat_lift_system_residual, full_system_residual, hstationary_residual, list_solutions,
    ratio_form_residual, residual_report, scale_transform, sech_lift_system_residual, twisted_closed_residual,
    type1_classifier,
)

ANALYTIC_TOL = 1e-8
SOLUTION_IDS = [item["id"] for item in list_solutions()]

speed_strategy = st.floats(min_value=1.2, max_value=3.0, allow_nan=False)


def exponential_solution():
    """f = e^{0.3x + 0.1y}, k = e^{-0.2x + 0.5y}: solves none of the equations."""
    rates = np.array([[0.3, 0.1], [-0.2, 0.5]])

    def jet(P):
        vals = np.exp(P @ rates.T)
        grads = vals[:, :, None] * rates[None, :, :]
        hess = vals[:, :, None, None] * np.einsum("ij,ik->ijk", rates, rates)[None]
        return vals, grads, hess

    return TwistorSolution("exponential", 2, 2, 0, {}, frozenset(), ((-1.0, 1.0), (-1.0, 1.0)), jet)


class TestRegisteredSolutions:

    def test_catalog_is_sorted_and_complete(self):
        assert SOLUTION_IDS == sorted(SOLUTION_IDS)
        for sid in ("sech-wave", "sec-pair", "csch-pair", "arctan-pair", "warped-triple"):
            assert sid in SOLUTION_IDS

    @pytest.mark.parametrize("sid", SOLUTION_IDS)
    def test_declared_equations_hold(self, sid):
        sol = build_solution(sid)
        report = residual_report(sol, GridSpec(count=40, seed=3))
        assert report.declared
        assert report.max_declared() < ANALYTIC_TOL, report.to_dict()

    @pytest.mark.parametrize("sign", [1.0, -1.0])
    def test_both_sign_branches(self, sign):
        sol = build_solution("sec-pair", {"sign": sign})
        assert residual_report(sol, GridSpec(count=30, seed=5)).max_declared() < ANALYTIC_TOL

    def test_unknown_solution(self):
        with pytest.raises(FamilyNotFoundError):
            build_solution("no-such-wave")

    def test_inadmissible_speed(self):
        with pytest.raises(AdmissibilityError):
            build_solution("sech-pair", {"m": 1.0})


class TestResiduals:

    def test_single_point_returns_float(self):
        sol = build_solution("exp-pair")
        value = divergence_form_residual(sol, [0.2, -0.1])
        assert isinstance(value, float)
        assert value < ANALYTIC_TOL

    def test_general_equation_against_divergence_form(self):
        """For two functions the general residual is 2/|fk| times the divergence form."""
        sol = exponential_solution()
        P = np.array([[0.1, 0.3], [-0.4, 0.2], [0.7, -0.5]])
        vals = sol.values(P)
        general = hstationary_residual(sol, P)
        pair = divergence_form_residual(sol, P)
        assert np.all(pair > 1e-3)
        np.testing.assert_allclose(general, 2.0 * pair / np.abs(vals[:, 0] * vals[:, 1]), rtol=1e-10)

    def test_curvature_term_depends_on_space_form(self):
        """Dropping epsilon leaves exactly the f k term of a sech wave."""
        sol = build_solution("sech-wave")
        p = np.array([0.3, 0.1])
        assert curvature_residual(sol, p) < ANALYTIC_TOL
        f, k = sol.values(p)[0]
        assert curvature_residual(replace(sol, epsilon=0), p) == pytest.approx(abs(f * k), rel=1e-9)
        assert ratio_form_residual(replace(sol, epsilon=0), p) < ANALYTIC_TOL

    def test_full_system_on_explicit_points(self):
        P = np.array([[0.1, 0.2], [-0.3, 0.4], [0.5, -0.5]])
        report = full_system_residual(build_solution("exp-pair"), P)
        assert set(report.equations) == {HSTATIONARY, TWISTED_CLOSED, CURVATURE}
        assert report.count == 3
        assert report.grid is None
        assert report.max_declared() < ANALYTIC_TOL

    def test_width_mismatch(self):
        with pytest.raises(DimensionError):
            twisted_closed_residual(build_solution("sech-pair"), [0.1, 0.2, 0.3])

    def test_warped_triple_is_trivially_closed(self):
        sol = build_solution("warped-triple")
        P = np.array([[0.1, 0.2, 0.3], [1.0, -1.0, 1.5]])
        np.testing.assert_array_equal(twisted_closed_residual(sol, P), 0.0)


class TestScaling:

    @given(m=speed_strategy)
    @settings(max_examples=15, deadline=None)
    def test_stretch_keeps_first_order_equations(self, m):
        sol = scale_transform(build_solution("sech-wave"), m, 1.3, ScaleMode.STRETCH)
        report = residual_report(sol, GridSpec(count=20, seed=11))
        assert report.declared == frozenset({HSTATIONARY, TWISTED_CLOSED})
        assert report.max_declared() < ANALYTIC_TOL

    @given(m=speed_strategy)
    @settings(max_examples=15, deadline=None)
    def test_traveling_keeps_whole_system(self, m):
        sol = scale_transform(build_solution("sech-wave"), m, mode="traveling")
        report = residual_report(sol, GridSpec(count=20, seed=11))
        assert CURVATURE in report.declared
        assert report.max_declared() < ANALYTIC_TOL

    def test_traveling_wave_matches_speed_pair(self):
        """A unit sech wave sent through the traveling transform is the sech pair."""
        m = 2.0
        moved = scale_transform(build_solution("sech-wave", {"c1": np.sqrt(2.0)}), m, mode=ScaleMode.TRAVELING)
        pair = build_solution("sech-pair", {"c": np.sqrt(1.0 + m * m), "m": m})
        P = np.array([[0.2, -0.3], [0.5, 0.1], [-1.0, 0.4]])
        np.testing.assert_allclose(moved.values(P), pair.values(P), rtol=1e-12)

    def test_traveling_needs_unit_speed_wave(self):
        with pytest.raises(AdmissibilityError):
            scale_transform(build_solution("sech-pair"), 2.0, mode=ScaleMode.TRAVELING)

    @pytest.mark.parametrize("m", [1.0, 0.0, -2.0])
    def test_invalid_speed(self, m):
        with pytest.raises(AdmissibilityError):
            scale_transform(build_solution("sech-wave"), m)

    def test_zero_stretch_constant(self):
        with pytest.raises(AdmissibilityError):
            scale_transform(build_solution("sech-wave"), 2.0, 0.0)

    def test_traveling_takes_no_constant(self):
        with pytest.raises(AdmissibilityError):
            scale_transform(build_solution("sech-wave"), 2.0, 1.5, ScaleMode.TRAVELING)

    @pytest.mark.parametrize("mode", list(ScaleMode))
    def test_x_interval_shrinks_by_m_squared(self, mode):
        sol = build_solution("sech-wave")
        moved = scale_transform(sol, 2.0, mode=mode)
        (lo, hi), (moved_lo, moved_hi) = sol.box[0], moved.box[0]
        assert (moved_lo, moved_hi) == pytest.approx((lo / 4.0, hi / 4.0))
        assert moved.box[1:] == sol.box[1:]


class TestClassification:

    def test_unit_speed_waves_are_type_one(self):
        assert type1_classifier(build_solution("sech-wave"))
        assert type1_classifier(build_solution("rational-wave", {"sign": -1.0}))

    def test_speed_pairs_are_type_two(self):
        assert not type1_classifier(build_solution("sech-pair"))
        assert not type1_classifier(build_solution("exp-pair"), [[0.1, 0.2], [0.3, -0.5]])


class TestLiftSystems:

    def test_flat_exponential_surface(self):
        handle = instantiate("c2-exp-pair", {"b": 0.2, "m": 2.0})
        for p in ([0.1, 0.2], [-0.5, 0.3], [0.6, -0.6]):
            jet = evaluate_jet(handle, np.array(p))
            assert flat_lift_system_residual(jet, 0.2, 2.0) < 1e-8

    def test_projective_sech_surface(self):
        handle = instantiate("cp2-sech-pair")
        m = handle.params["m"]
        for p in ([0.1, 0.2], [-0.4, 0.3]):
            jet = evaluate_jet(handle, np.array(p))
            assert sech_lift_system_residual(jet, m) < 1e-6

    def test_lift_system_needs_a_surface(self):
        handle = instantiate("cp3-rp3")
        jet = evaluate_jet(handle, np.array([0.6, 0.7, 0.2]))
        with pytest.raises(DimensionError):
            flat_lift_system_residual(jet, 0.1, 2.0)
