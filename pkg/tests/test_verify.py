"""
Verification runner: configuration, per-family reports, exit status and report files.
"""

import json

import numpy as np
import pytest

from hstationary_lab import diffgeo
from hstationary_lab.catalog import FAMILIES, Tier, instantiate
from hstationary_lab.config import TOLERANCE_PROFILES
from hstationary_lab.errors import ConfigError, DegeneracyError, DomainError
from hstationary_lab.grids import GridSpec
from hstationary_lab.verify import (
    EXIT_FAILED, EXIT_OK, NESTED_CHECKS, CheckReport, CheckResult, FamilyRequest, RunConfig, _ledgered_failures,
    emit_report, exit_status, ledger, parse_report, run_verification, verify_handle,
)

TIER_A_IDS = sorted(fid for fid, fam in FAMILIES.items() if fam.tier is Tier.A)
OUTRIGHT_IDS = [f"chn-warped-{item:02d}" for item in range(1, 9)] + ["cp3-composed", "ch3-composed"]


def quick_config(ids, **kwargs):
    kwargs.setdefault("grid", GridSpec(count=6, seed=7))
    kwargs.setdefault("nested_points", 2)
    return RunConfig.for_families(ids, **kwargs)


def failing_report(tier, ledger_note="", ledgered=False, error=None):
    check = CheckResult("pattern", 1e-2, 1e-2, 1e-6, False, ledgered=ledgered)
    return CheckReport(family="c2-torus", params={"a": 1.0}, grid={}, checks=(check,), tier=tier, ledger=ledger_note,
                       error=error)


class TestRunConfig:

    def test_unknown_family(self):
        with pytest.raises(ConfigError):
            RunConfig.for_families(["c2-torus", "no-such-family"])

    def test_unknown_override(self):
        with pytest.raises(ConfigError):
            RunConfig.for_families(["c2-torus"], tolerance_overrides={"wobble": 1.0})

    def test_negative_draws(self):
        with pytest.raises(ConfigError):
            RunConfig.for_families(["c2-torus"], draws=-1)

    def test_nested_points_must_be_positive(self):
        with pytest.raises(ConfigError):
            RunConfig.for_families(["c2-torus"], nested_points=0)

    def test_unknown_profile(self):
        with pytest.raises(ConfigError):
            RunConfig.for_families(["c2-torus"], tolerance_profile="tight")

    def test_tolerances(self):
        config = RunConfig.for_families(["c2-torus"], tolerance_overrides={"div_jh": 5e-3})
        assert config.tolerance("div_jh") == 5e-3
        assert config.tolerance("curvature") == TOLERANCE_PROFILES["default"].nested
        assert config.tolerance("twistor_hstationary") == TOLERANCE_PROFILES["default"].analytic
        loose = RunConfig.for_families(["c2-torus"], tolerance_profile="loose")
        assert loose.tolerance("pattern") == pytest.approx(1e-4)
        assert config.tolerance("pattern", exact_jets=True) == TOLERANCE_PROFILES["default"].analytic
        assert config.tolerance("isotropy", exact_jets=True) == TOLERANCE_PROFILES["default"].fd

    def test_from_dict(self):
        config = RunConfig.from_dict({
            "families": ["c2-torus", {"id": "c2-exp-pair", "params": {"b": 0.1, "m": 2.0}}],
            "grid": {"count": 12, "mode": "uniform", "seed": 3},
            "draws": 1,
        })
        assert [req.id for req in config.families] == ["c2-torus", "c2-exp-pair"]
        assert config.families[1].params == {"b": 0.1, "m": 2.0}
        assert config.grid.count == 12 and config.grid.seed == 3
        assert config.draws == 1

    def test_all_families(self):
        config = RunConfig.from_dict({"families": "all"})
        ids = [req.id for req in config.families]
        assert ids == sorted(ids) and "c2-torus" in ids

    def test_invalid_grid(self):
        with pytest.raises(ConfigError):
            RunConfig.from_dict({"families": ["c2-torus"], "grid": {"mode": "spiral"}})

    def test_bad_family_entry(self):
        with pytest.raises(ConfigError):
            FamilyRequest.parse(42)

    def test_from_file(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"families": ["c2-torus"], "tolerance_profile": "loose"}))
        assert RunConfig.from_file(str(path)).tolerance_profile == "loose"
        with pytest.raises(ConfigError):
            RunConfig.from_file(str(tmp_path / "missing.json"))


class TestVerification:

    def test_torus_passes(self):
        reports = run_verification(quick_config(["c2-torus"]), single_thread=True)
        assert len(reports) == 1
        report = reports[0]
        names = {c.name for c in report.checks}
        for name in ("isotropy", "pattern", "nullity", "curvature", "div_jh", "metric_twistor",
                     "twistor_hstationary"):
            assert name in names
        assert report.passed, [c.to_dict() for c in report.checks if not c.passed]
        assert exit_status(reports) == EXIT_OK

    def test_lift_checks(self):
        report = run_verification(quick_config(["cp2-type1"]), single_thread=True)[0]
        names = {c.name for c in report.checks}
        assert {"quadric", "contact", "isotropy", "fiber_invariance"} <= names

    def test_negative_control_is_an_expected_failure(self):
        reports = run_verification(quick_config(["c2-control"]), single_thread=True)
        report = reports[0]
        div = next(c for c in report.checks if c.name == "div_jh")
        assert not div.passed
        assert div.expected_fail
        assert div.max_residual > 0.1
        assert exit_status(reports) == EXIT_OK
        entries = ledger(reports)
        assert entries and all(e["expected_fail"] for e in entries)

    def test_inadmissible_parameters_are_reported(self):
        config = RunConfig(families=(FamilyRequest("c2-torus", {"a": -1.0}),), grid=GridSpec(count=4))
        report = run_verification(config, single_thread=True)[0]
        assert report.error and report.error.startswith("AdmissibilityError")
        assert exit_status([report]) == EXIT_FAILED

    def test_draws_add_sorted_parameter_sets(self):
        reports = run_verification(quick_config(["c2-torus"], draws=2), single_thread=True)
        assert len(reports) == 3
        keys = [tuple(sorted(r.params.items())) for r in reports]
        assert keys == sorted(keys)
        assert all(0.5 <= r.params["a"] <= 1.5 for r in reports)

    def test_parallel_run_matches_single_thread(self):
        config = quick_config(["c2-torus", "c2-control"], workers=2)
        serial = emit_report(run_verification(config, single_thread=True), timestamp=False)
        parallel = emit_report(run_verification(config), timestamp=False)
        assert serial == parallel

    @pytest.mark.parametrize("params", [{"n": 2, "ell": 1}, {"n": 3, "ell": 2, "a1": 0.8, "a2": 1.3}])
    def test_circle_line_pattern_is_exact(self, params):
        config = RunConfig(families=(FamilyRequest("cn-circle-line", params),), grid=GridSpec(count=50, seed=11),
                           nested_points=2, tolerance_overrides={"pattern": 1e-10})
        report = run_verification(config, single_thread=True)[0]
        pattern = next(c for c in report.checks if c.name == "pattern")
        assert pattern.tolerance == 1e-10
        assert pattern.passed and pattern.max_residual < 1e-10
        assert report.passed, [c.to_dict() for c in report.checks if not c.passed]

    def test_degenerate_stencil_fails_every_nested_check(self, monkeypatch):
        def degenerate(*args, **kwargs):
            raise DegeneracyError(-1e-3)

        monkeypatch.setattr(diffgeo, "codazzi_residual", degenerate)
        report = verify_handle(instantiate("c2-torus"), quick_config(["c2-torus"]))
        nested = {c.name: c for c in report.checks if c.name in NESTED_CHECKS}
        assert set(nested) == set(NESTED_CHECKS)
        assert all(np.isinf(c.max_residual) and not c.passed for c in nested.values())
        assert exit_status([report]) == EXIT_FAILED

    def test_no_stencil_in_the_domain_is_a_failure(self, monkeypatch):
        def outside(handle, p, *args, **kwargs):
            raise DomainError("outer stencil outside the box", p)

        monkeypatch.setattr(diffgeo, "sectional_curvature_residual", outside)
        report = verify_handle(instantiate("c2-torus"), quick_config(["c2-torus"]))
        nested = {c.name: c for c in report.checks if c.name in NESTED_CHECKS}
        assert set(nested) == set(NESTED_CHECKS)
        assert all(not c.passed and c.note == "no sampled stencil fits the domain" for c in nested.values())
        assert report.unexpected_failures() == sorted(NESTED_CHECKS)

    def test_ledgered_variant_marks_its_failures(self):
        config = RunConfig(families=(FamilyRequest("cp3-tanh", {"b": 0.6}),), grid=GridSpec(count=6, seed=7),
                           nested_points=2)
        reports = run_verification(config, single_thread=True)
        quadric = next(c for c in reports[0].checks if c.name == "quadric")
        assert not quadric.passed and quadric.ledgered
        assert all(c.ledgered for c in reports[0].checks if not c.passed)
        assert exit_status(reports) == EXIT_OK
        assert "ledger" in emit_report(reports, "text")

    @pytest.mark.parametrize("fid", ["ch2-sec-trig", "ch3-disc-hyperbolic"])
    def test_sign_corrected_families_stay_on_the_lift(self, fid):
        report = run_verification(quick_config([fid]), single_thread=True)[0]
        roots = {c.name: c for c in report.checks if c.name in ("quadric", "contact", "isotropy", "metric_positivity")}
        assert len(roots) == 4
        assert all(c.passed for c in roots.values()), [c.to_dict() for c in roots.values()]


class TestExitStatus:

    def test_tier_a_failure_fails_the_run(self):
        assert exit_status([failing_report("A")]) == EXIT_FAILED

    def test_ledgered_tier_b_failure_is_tolerated(self):
        assert exit_status([failing_report("B", "suspected transcription issue", ledgered=True)]) == EXIT_OK

    def test_unledgered_tier_b_failure_fails_the_run(self):
        assert exit_status([failing_report("B")]) == EXIT_FAILED

    def test_family_note_alone_excuses_nothing(self):
        assert exit_status([failing_report("B", "parameters are forwarded to the inner surface")]) == EXIT_FAILED

    def test_errors_are_never_excused(self):
        report = failing_report("B", "suspected transcription issue", ledgered=True, error="DomainError: x")
        assert report.unexpected_failures() == ["error"]
        assert exit_status([report]) == EXIT_FAILED

    def test_downstream_of_a_ledgered_root(self):
        handle = instantiate("cp3-tanh")
        assert _ledgered_failures(handle, {"quadric", "curvature", "twistor_hstationary"}) == {
            "quadric", "curvature", "twistor_hstationary"}
        assert _ledgered_failures(handle, {"curvature"}) == set()
        assert _ledgered_failures(instantiate("ch3-disc-hyperbolic-printed"), {"quadric", "contact"}) == {
            "quadric", "contact"}
        assert _ledgered_failures(instantiate("cn-twisted-circles-printed"), {"isotropy", "metric_positivity",
                                                                             "pattern"}) == {"isotropy", "pattern"}
        assert _ledgered_failures(instantiate("cp3-composed"), {"pattern", "quadric"}) == set()
        assert _ledgered_failures(instantiate("c2-spiral-printed"), {"pattern", "div_jh"}) == {"pattern"}

    def test_empty_run(self):
        assert exit_status([]) == EXIT_OK


class TestReports:

    def test_json_document(self, tmp_path):
        reports = run_verification(quick_config(["c2-torus"]), single_thread=True)
        path = tmp_path / "report.json"
        text = emit_report(reports, "json", str(path), timestamp=False)
        assert path.read_text() == text
        document = json.loads(text)
        assert document["exit_status"] == EXIT_OK
        check = document["reports"][0]["checks"][0]
        assert set(check) == {"name", "max_residual", "rms_residual", "tolerance", "pass", "note", "expected_fail",
                              "ledgered"}
        assert "timestamp" not in document["reports"][0]
        parsed = parse_report(text)
        assert [r.to_dict(timestamp=False) for r in parsed] == [r.to_dict(timestamp=False) for r in reports]

    def test_text_table(self):
        reports = run_verification(quick_config(["c2-control"]), single_thread=True)
        text = emit_report(reports, "text")
        assert "c2-control" in text
        assert "xfail" in text
        assert text.rstrip().endswith("exit status 0")

    def test_unknown_format(self):
        with pytest.raises(ConfigError):
            emit_report([], "yaml")


@pytest.mark.slow
class TestCatalogSweep:

    def test_full_catalog(self):
        config = RunConfig.from_dict({"families": "all", "grid": {"count": 50, "seed": 20130713}, "draws": 2,
                                      "nested_points": 10})
        reports = run_verification(config)
        assert len({r.family.split("[")[0] for r in reports}) >= 40
        assert exit_status(reports) == EXIT_OK, [(r.family, r.unexpected_failures()) for r in reports
                                                 if r.unexpected_failures()]
        for entry in ledger(reports):
            assert entry["note"], entry


@pytest.mark.slow
class TestOutrightFamilies:

    @staticmethod
    def dense_report(fid):
        config = RunConfig.for_families([fid], grid=GridSpec(count=50, seed=20130713), nested_points=10)
        return run_verification(config, single_thread=True)[0]

    @pytest.mark.parametrize("fid", OUTRIGHT_IDS)
    def test_unledgered_tier_b_family_passes(self, fid):
        report = self.dense_report(fid)
        assert report.error is None, report.error
        assert report.passed, [c.to_dict() for c in report.checks if not c.passed]

    @pytest.mark.parametrize("fid", TIER_A_IDS)
    def test_tier_a_family_passes(self, fid):
        report = self.dense_report(fid)
        assert report.error is None, report.error
        assert report.passed, [c.to_dict() for c in report.checks if not c.passed]
        assert not report.unexpected_failures()
