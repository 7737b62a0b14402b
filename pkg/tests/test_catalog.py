"""
Family registry: manifest coverage, instantiation, sampling and composition.
"""

import json
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hstationary_lab.ambient import CVector, quadric_residual
from hstationary_lab.catalog import (
    FAMILIES, MANIFEST_ITEMS, Tier, compose_with_inner, coverage_problems, get_family, instantiate, list_families,
    manifest_coverage, manifest_document, manifest_json, sample_domain,
)
from hstationary_lab.catalog.base import register
from hstationary_lab.diffgeo import geometry_at, lagrangian_residual, mean_curvature, relative_nullity
from hstationary_lab.errors import AdmissibilityError, CompositionError, FamilyNotFoundError
from hstationary_lab.grids import GridSpec, SamplingMode, box_violation
from hstationary_lab.jets import evaluate_jet
from hstationary_lab.verify import CHECK_TIERS

ALL_IDS = sorted(FAMILIES)
LIFT_IDS_A = sorted(fid for fid, fam in FAMILIES.items() if fam.ambient.is_lift and fam.tier is Tier.A)


class TestManifest:

    def test_every_item_has_exactly_one_family(self):
        assert coverage_problems() == []
        coverage = manifest_coverage()
        assert set(coverage) == set(MANIFEST_ITEMS)
        assert all(len(ids) == 1 for ids in coverage.values())

    def test_item_counts(self):
        assert sum(item.startswith("chn-warped:") for item in MANIFEST_ITEMS) == 21
        assert sum(item.startswith("ch3-nullity:") for item in MANIFEST_ITEMS) == 10
        assert sum(item.startswith("cp3-nullity:") for item in MANIFEST_ITEMS) == 5

    def test_variants_are_ledgered(self):
        for fam in FAMILIES.values():
            if fam.variant_of is None:
                continue
            assert fam.variant_of in FAMILIES, fam.id
            assert fam.tier is Tier.B
            assert fam.manifest_key is None
            assert fam.note, f"{fam.id} needs a discrepancy note"

    def test_json_document(self):
        document = json.loads(manifest_json())
        assert document["count"] == len(FAMILIES)
        assert [f["id"] for f in document["families"]] == ALL_IDS
        torus = next(f for f in document["families"] if f["id"] == "c2-torus")
        assert torus["item"] == "c2-type1:torus"
        assert torus["twistor"] == "exp-wave"

    def test_filtered_document(self):
        document = manifest_document(ambient="flat", include_variants=False)
        assert document["families"]
        assert all(f["ambient"] == "flat" and f["variant_of"] is None for f in document["families"])


class TestListing:

    def test_sorted_by_id(self):
        ids = [f["id"] for f in list_families()]
        assert ids == sorted(ids)

    @pytest.mark.parametrize("ambient", ["flat", "spherical-lift", "hyperbolic-lift"])
    def test_ambient_filter(self, ambient):
        listed = list_families(ambient=ambient)
        assert listed
        assert all(f["ambient"] == ambient for f in listed)

    def test_dimension_and_tier_filters(self):
        threefolds = list_families(dim=3)
        assert threefolds and all(f["n"] == 3 for f in threefolds)
        strict = list_families(tier="A")
        assert strict and all(f["tier"] == "A" for f in strict)

    def test_unknown_family(self):
        with pytest.raises(FamilyNotFoundError):
            get_family("c7-nothing")


class TestInstantiation:

    def test_defaults(self):
        handle = instantiate("c2-torus")
        assert handle.params == {"a": 1.0}
        assert handle.label() == "c2-torus"

    def test_unknown_parameter(self):
        with pytest.raises(AdmissibilityError):
            instantiate("c2-torus", {"q": 1.0})

    def test_violated_predicate(self):
        with pytest.raises(AdmissibilityError):
            instantiate("c2-torus", {"a": -1.0})
        with pytest.raises(AdmissibilityError):
            instantiate("c2-exp-pair", {"m": 1.0})

    @given(a=st.floats(min_value=0.1, max_value=5.0, allow_nan=False))
    @settings(max_examples=20, deadline=None)
    def test_torus_values(self, a):
        handle = instantiate("c2-torus", {"a": a})
        values = handle.evaluate(np.array([[0.3, -0.7]]))
        np.testing.assert_allclose(values[0], a * np.exp(1j * np.array([0.3, -0.7])))

    @pytest.mark.parametrize("fid", ALL_IDS)
    def test_every_family_evaluates_on_its_domain(self, fid):
        handle = instantiate(fid)
        P = handle.sample(GridSpec(count=8, seed=2))
        assert not np.any(box_violation(handle.box, P, 0.0))
        values = handle.evaluate(P)
        assert values.shape == (P.shape[0], handle.family.m)
        assert np.all(np.isfinite(values))

    @pytest.mark.parametrize("fid", LIFT_IDS_A)
    def test_tier_a_lifts_lie_on_their_quadric(self, fid):
        handle = instantiate(fid)
        model = handle.family.ambient
        for z in handle.evaluate(handle.sample(GridSpec(count=10, seed=4))):
            assert quadric_residual(CVector(z, model.signature), model) < 1e-10

    def test_uniform_sampling_respects_singular_loci(self):
        handle = instantiate("ch2-rational-pair")
        P = sample_domain(handle, GridSpec(count=25, mode=SamplingMode.UNIFORM))
        for locus in handle.singular:
            assert np.all(locus.clearance(P, handle.params) > 0.05)


class TestComposition:

    def test_default_inner_surface(self):
        handle = instantiate("cp3-composed")
        assert handle.inner is not None
        assert handle.label() == "cp3-composed[cp2-sech-pair]"
        P = handle.sample(GridSpec(count=5, seed=1))
        model = handle.family.ambient
        for z in handle.evaluate(P):
            assert quadric_residual(CVector(z, model.signature), model) < 1e-10

    def test_parameters_reach_the_inner_surface(self):
        handle = instantiate("cp3-composed", {"m": 2.5})
        assert handle.inner.params == {"m": 2.5}

    def test_hyperbolic_composition(self):
        handle = compose_with_inner("ch3-composed", instantiate("ch2-csch-pair"))
        assert handle.family.n == 3
        assert len(handle.box) == 3

    def test_wrong_ambient(self):
        with pytest.raises(CompositionError):
            compose_with_inner("cp3-composed", instantiate("ch2-csch-pair"))

    def test_inner_must_be_type_two(self):
        with pytest.raises(CompositionError):
            compose_with_inner("cp3-composed", instantiate("cp2-type1"))

    def test_outer_must_be_a_composition(self):
        with pytest.raises(CompositionError):
            compose_with_inner("c2-torus", instantiate("cp2-sech-pair"))


class TestWarpedDimensions:

    def test_single_circle_jet(self):
        handle = instantiate("cn-circle-line", {"n": 1, "ell": 1, "a1": 2.0})
        jet = evaluate_jet(handle, np.array([0.0]))
        assert jet.analytic
        np.testing.assert_allclose(jet.value, [2.0], atol=1e-14)
        np.testing.assert_allclose(jet.grad, [[2j]], atol=1e-14)
        np.testing.assert_allclose(jet.hess, [[[-2.0]]], atol=1e-14)

    def test_circle_and_line_in_c2(self):
        handle = instantiate("cn-circle-line", {"a1": 1.0, "ell": 1, "n": 2})
        assert handle.family.n == 2
        assert handle.params == {"n": 2.0, "ell": 1.0, "a1": 1.0}
        values = handle.evaluate(np.array([[0.5, -0.7]]))
        np.testing.assert_allclose(values[0], [np.exp(0.5j), -0.7], atol=1e-14)

    @pytest.mark.parametrize("n,a1", [(1, 2.0), (2, 1.0), (3, 0.7), (4, 1.3)])
    def test_mean_curvature_length(self, n, a1):
        handle = instantiate("cn-circle-line", {"n": n, "ell": 1, "a1": a1})
        geom = geometry_at(handle, np.full(n, 0.3))
        assert np.linalg.norm(mean_curvature(geom)) == pytest.approx(1.0 / (n * a1), rel=1e-10)

    @pytest.mark.parametrize("ell", [1, 2])
    def test_relative_nullity_in_dimension_three(self, ell):
        handle = instantiate("cn-circle-line", {"n": 3, "ell": ell, "a1": 1.0, "a2": 0.8})
        assert handle.family.nullity == (3 - ell, 3 - ell)
        assert handle.family.pattern.coords == tuple(range(ell))
        assert len(handle.box) == 3
        geom = geometry_at(handle, np.array([0.2, -0.4, 0.6]))
        assert relative_nullity(geom) == 3 - ell

    def test_unused_amplitudes_are_dropped(self):
        handle = instantiate("cn-circle-line", {"n": 3, "ell": 1, "a2": 5.0})
        assert "a2" not in handle.params and "a4" not in handle.params

    @pytest.mark.parametrize("params", [
        {"n": 5}, {"n": 2, "ell": 3}, {"n": 1.5}, {"ell": -1}, {"n": 2, "ell": 2, "a2": 0.0},
    ])
    def test_inadmissible_dimensions(self, params):
        with pytest.raises(AdmissibilityError):
            instantiate("cn-circle-line", params)

    def test_twisted_blocks_with_extra_circle_and_line(self):
        handle = instantiate("cn-twisted-circles", {"n": 4, "ell": 2, "k": 1, "b1": 0.5, "a2": 1.2})
        assert handle.family.m == 4
        assert handle.family.nullity == (2, 2)
        assert handle.box[2] == (0.3, 2.0)
        p = np.array([0.3, -0.2, 1.1, 0.4])
        geom = geometry_at(handle, p)
        np.testing.assert_allclose(np.diag(geom.g), [0.25 * 1.1 ** 2, 1.44, 1.0, 1.0], atol=1e-12)
        assert lagrangian_residual(geom.jet) < 1e-12

    def test_twisted_rules(self):
        with pytest.raises(AdmissibilityError):
            instantiate("cn-twisted-circles", {"n": 3, "ell": 2, "k": 2})
        with pytest.raises(AdmissibilityError):
            instantiate("cn-twisted-circles-printed", {"b1": 0.6})

    @pytest.mark.parametrize("n,ell", [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2)])
    def test_projective_blocks_lie_on_the_sphere(self, n, ell):
        handle = instantiate("cpn-warped-a", {"n": n, "ell": ell})
        model = handle.family.ambient
        assert model.n == n and handle.family.nullity == (n - ell, n - ell)
        for z in handle.evaluate(handle.sample(GridSpec(count=6, seed=3))):
            assert quadric_residual(CVector(z, model.signature), model) < 1e-10

    def test_projective_blocks_need_room(self):
        with pytest.raises(AdmissibilityError):
            instantiate("cpn-warped-a", {"n": 2, "ell": 2})

    @pytest.mark.parametrize("ell", [2, 3])
    def test_odd_blocks_fix_the_dimension(self, ell):
        handle = instantiate("cpn-warped-b", {"ell": ell})
        assert handle.family.n == 2 * ell - 1
        assert handle.family.nullity == (ell - 1, ell - 1)
        geom = geometry_at(handle, np.array([0.1] * ell + [0.7] * (ell - 1)))
        np.testing.assert_allclose(geom.g, handle.family.advertised_metric(geom.jet.point[None, :], handle.params)[0],
                                   atol=1e-10)


class TestLedgers:

    def test_ledgered_names_are_checks(self):
        for fam in FAMILIES.values():
            assert set(fam.ledgered) <= set(CHECK_TIERS), fam.id
            assert set(fam.expected_fail) <= set(CHECK_TIERS), fam.id

    def test_tier_a_ledgers_nothing(self):
        for fam in FAMILIES.values():
            if fam.tier is Tier.A:
                assert not fam.ledgered and not fam.expected_fail, fam.id

    def test_register_needs_a_note_to_ledger(self):
        with pytest.raises(ValueError):
            register(replace(get_family("cp3-tanh"), id="cp3-tanh-unnoted", note=""))
        with pytest.raises(ValueError):
            register(replace(get_family("c2-torus"), id="c2-torus-ledgered", ledgered=("pattern",)))
        assert "cp3-tanh-unnoted" not in FAMILIES and "c2-torus-ledgered" not in FAMILIES

    def test_disc_hyperbolic_sign(self):
        canonical = instantiate("ch3-disc-hyperbolic")
        printed = instantiate("ch3-disc-hyperbolic-printed")
        assert get_family("ch3-disc-hyperbolic-printed").variant_of == "ch3-disc-hyperbolic"
        model = canonical.family.ambient
        P = canonical.sample(GridSpec(count=10, seed=5))
        on = [quadric_residual(CVector(z, model.signature), model) for z in canonical.evaluate(P)]
        off = [quadric_residual(CVector(z, model.signature), model) for z in printed.evaluate(P)]
        assert max(on) < 1e-10
        assert max(off) > 1e-4
