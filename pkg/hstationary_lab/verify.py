#!/usr/bin/env python3
"""
VERIFICATION RUNNER

Runs every applicable check over sampled chart points for each family and
parameter set, and turns the results into JSON or fixed-width text reports.

This module:
1. Loads and validates run configurations (families, grid, tolerances)
2. Verifies each (family, params) job in a worker pool
3. Reduces per-point residuals to max/rms with deterministic ordering
4. Emits and parses reports and derives the process exit status
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple

import numpy as np

from . import diffgeo
from .ambient import legendrian_residuals, quadric_residual
from .catalog import EXPECTED_FAIL_NOTE, FAMILIES, ImmersionHandle, Tier, get_family, instantiate
from .config import DEFAULT_STEP, OUTER_STEP, RANK_TOL, VERSION, ToleranceProfile, tolerance_profile, worker_count
from .errors import AdmissibilityError, ConfigError, DegeneracyError, DomainError, LabError, SamplingError
from .grids import GridSpec
from .jets import evaluate_jet
from .params import draw_params, params_key
from .twistor import ALL_EQUATIONS, residual_report

logger = logging.getLogger(__name__)

# check name -> tolerance tier of the profile
CHECK_TIERS: Dict[str, str] = {
    "quadric": "exact",
    "contact": "fd",
    "isotropy": "fd",
    "metric_positivity": "exact",
    "metric_advertised": "fd",
    "metric_twistor": "fd",
    "pattern": "fd",
    "h_normality": "fd",
    "cubic_symmetry": "fd",
    "normal_connection": "fd",
    "lift_system": "fd",
    "curvature": "nested",
    "div_jh": "nested",
    "codazzi": "codazzi",
    "fiber_invariance": "exact",
    "nullity": "exact",
    "twistor": "analytic",
}

# tiers that replace CHECK_TIERS when the jets are exact
EXACT_JET_TIERS: Dict[str, str] = {"pattern": "analytic"}

# checks every other residual depends on
ROOT_CHECKS = ("quadric", "contact", "isotropy", "metric_positivity")

NESTED_CHECKS = ("curvature", "div_jh", "codazzi")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


# =============================================================================
# CONFIGURATION AND REPORT TYPES
# =============================================================================

@dataclass(frozen=True)
class FamilyRequest:
    """One family to verify, with optional explicit parameters"""
    id: str
    params: Optional[Dict[str, float]] = None

    @classmethod
    def parse(cls, item) -> "FamilyRequest":
        if isinstance(item, str):
            return cls(item)
        if isinstance(item, Mapping) and "id" in item:
            params = item.get("params")
            return cls(str(item["id"]), {k: float(v) for k, v in params.items()} if params else None)
        raise ConfigError(f"family entries must be ids or {{'id', 'params'}} objects, got {item!r}")


@dataclass(frozen=True)
class RunConfig:
    """
    What to verify and how.

    `draws` adds that many seeded random admissible parameter sets per
    family on top of the requested (or default) set. `nested_points` caps the
    points used by the stencil checks (curvature, div JH, Codazzi).
    """
    families: Tuple[FamilyRequest, ...]
    grid: GridSpec = field(default_factory=GridSpec)
    tolerance_profile: str = "default"
    tolerance_overrides: Dict[str, float] = field(default_factory=dict)
    output: Optional[str] = None
    draws: int = 0
    nested_points: Optional[int] = None
    workers: Optional[int] = None
    step: float = DEFAULT_STEP
    outer_step: float = OUTER_STEP

    def __post_init__(self):
        unknown = [req.id for req in self.families if req.id not in FAMILIES]
        if unknown:
            raise ConfigError(f"unknown family ids: {unknown}")
        known = set(CHECK_TIERS) | {f"twistor_{name}" for name in ALL_EQUATIONS}
        bad = sorted(set(self.tolerance_overrides) - known)
        if bad:
            raise ConfigError(f"tolerance overrides for unknown checks: {bad}")
        if self.draws < 0:
            raise ConfigError(f"draws must be non-negative, got {self.draws}")
        if self.nested_points is not None and self.nested_points < 1:
            raise ConfigError(f"nested_points must be at least 1, got {self.nested_points}")
        tolerance_profile(self.tolerance_profile)

    @classmethod
    def for_families(cls, ids: Sequence[str], **kwargs) -> "RunConfig":
        return cls(families=tuple(FamilyRequest(fid) for fid in ids), **kwargs)

    @classmethod
    def from_dict(cls, data: Mapping) -> "RunConfig":
        raw = data.get("families")
        if raw in (None, "all"):
            requests = tuple(FamilyRequest(fid) for fid in sorted(FAMILIES))
        else:
            requests = tuple(FamilyRequest.parse(item) for item in raw)
        try:
            grid = GridSpec.from_dict(data.get("grid", {}))
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"invalid grid spec: {exc}") from exc
        return cls(
            families=requests,
            grid=grid,
            tolerance_profile=data.get("tolerance_profile", "default"),
            tolerance_overrides={k: float(v) for k, v in data.get("tolerance_overrides", {}).items()},
            output=data.get("output"),
            draws=int(data.get("draws", 0)),
            nested_points=data.get("nested_points"),
            workers=data.get("workers"),
        )

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read run config {path}: {exc}") from exc
        return cls.from_dict(data)

    def tolerance(self, check: str, exact_jets: bool = False) -> float:
        if check in self.tolerance_overrides:
            return self.tolerance_overrides[check]
        profile: ToleranceProfile = tolerance_profile(self.tolerance_profile)
        tier = CHECK_TIERS["twistor" if check.startswith("twistor_") else check]
        if exact_jets:
            tier = EXACT_JET_TIERS.get(check, tier)
        return getattr(profile, tier)


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_residual: float
    rms_residual: float
    tolerance: float
    passed: bool
    note: str = ""
    expected_fail: bool = False
    ledgered: bool = False

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "max_residual": self.max_residual,
            "rms_residual": self.rms_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "note": self.note,
            "expected_fail": self.expected_fail,
            "ledgered": self.ledgered,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "CheckResult":
        return cls(
            name=data["name"],
            max_residual=float(data["max_residual"]),
            rms_residual=float(data["rms_residual"]),
            tolerance=float(data["tolerance"]),
            passed=bool(data["pass"]),
            note=data.get("note", ""),
            expected_fail=bool(data.get("expected_fail", False)),
            ledgered=bool(data.get("ledgered", False)),
        )


@dataclass(frozen=True)
class CheckReport:
    """Verification outcome for one family and one parameter set"""
    family: str
    params: Dict[str, float]
    grid: dict
    checks: Tuple[CheckResult, ...]
    tier: str
    timestamp: str = ""
    version: str = VERSION
    error: Optional[str] = None
    ledger: str = ""

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def unexpected_failures(self) -> List[str]:
        """
        Failures that must change the exit status: every failing check not
        marked expected or ledgered, and any error.
        """
        bad = [c.name for c in self.checks if not c.passed and not (c.expected_fail or c.ledgered)]
        return bad + (["error"] if self.error else [])

    def to_dict(self, timestamp: bool = True) -> dict:
        out = {
            "family": self.family,
            "params": dict(sorted(self.params.items())),
            "grid": self.grid,
            "checks": [c.to_dict() for c in self.checks],
            "tier": self.tier,
            "version": self.version,
            "error": self.error,
            "ledger": self.ledger,
        }
        if timestamp:
            out["timestamp"] = self.timestamp
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "CheckReport":
        return cls(
            family=data["family"],
            params={k: float(v) for k, v in data["params"].items()},
            grid=data["grid"],
            checks=tuple(CheckResult.from_dict(c) for c in data["checks"]),
            tier=data["tier"],
            timestamp=data.get("timestamp", ""),
            version=data.get("version", VERSION),
            error=data.get("error"),
            ledger=data.get("ledger", ""),
        )


# =============================================================================
# PER-FAMILY VERIFICATION
# =============================================================================

class _Collector:
    """Per-check residual lists for one job"""

    def __init__(self):
        self.values: Dict[str, List[float]] = {}
        self.notes: Dict[str, str] = {}

    def add(self, name: str, value: float):
        self.values.setdefault(name, []).append(float(value))

    def reduce(self) -> Dict[str, Tuple[float, float]]:
        out = {}
        for name, values in self.values.items():
            arr = np.asarray(values, dtype=float)
            out[name] = (float(np.max(arr)), float(np.sqrt(np.mean(arr * arr))))
        return out


def _pointwise_checks(handle: ImmersionHandle, P: np.ndarray, config: RunConfig, rng: np.random.Generator,
                      collector: _Collector):
    family = handle.family
    model = family.ambient
    sol = handle.twistor()
    for p in P:
        jet = evaluate_jet(handle, p, config.step)
        if model.is_lift:
            collector.add("quadric", quadric_residual(jet.value_vector(), model))
            contact, isotropy = legendrian_residuals(jet.value_vector(), jet.tangents(), model)
            collector.add("contact", contact)
            collector.add("isotropy", isotropy)
        else:
            collector.add("isotropy", diffgeo.lagrangian_residual(jet))

        min_eig = diffgeo.min_metric_eigenvalue(jet, model)
        collector.add("metric_positivity", max(0.0, -min_eig))
        try:
            geom = diffgeo.second_fundamental_form(jet, model)
        except DegeneracyError as exc:
            collector.add("metric_positivity", max(abs(exc.min_eigenvalue), config.tolerance("metric_positivity") * 10))
            continue

        collector.add("h_normality", diffgeo.h_normality_residual(geom))
        collector.add("cubic_symmetry", diffgeo.cubic_symmetry_residual(geom))
        collector.add("normal_connection", diffgeo.normal_connection_residual(geom))
        collector.add("fiber_invariance", diffgeo.fiber_invariance_residual(jet, model, rng.uniform(0.0, 2 * np.pi)))

        if family.advertised_metric is not None:
            advertised = family.advertised_metric(p[None, :], handle.params)[0]
            collector.add("metric_advertised", np.max(np.abs(geom.g - advertised)))
        if sol is not None:
            f = sol.values(p)[0]
            collector.add("metric_twistor", np.max(np.abs(geom.g - np.diag(f * f))))
        if family.pattern is not None:
            kappa = family.pattern.scale(handle.params)
            collector.add("pattern", diffgeo.pattern_residual(geom, family.pattern.coords, kappa))
        if family.nullity is not None:
            lo, hi = family.nullity
            nu = diffgeo.relative_nullity(geom, RANK_TOL)
            collector.add("nullity", max(lo - nu, nu - hi, 0))
        if family.lift_system is not None:
            collector.add("lift_system", family.lift_system.residual(jet, handle.params))


def _nested_checks(handle: ImmersionHandle, P: np.ndarray, config: RunConfig, collector: _Collector):
    if config.nested_points is not None:
        P = P[:config.nested_points]
    collected = 0
    for p in P:
        try:
            values = (
                diffgeo.sectional_curvature_residual(handle, p, config.step, config.outer_step),
                abs(diffgeo.div_jh(handle, p, config.step, config.outer_step)),
                diffgeo.codazzi_residual(handle, p, config.step, config.outer_step),
            )
        except DomainError:
            logger.debug("stencil at %s leaves the domain of %s, point skipped", p, handle.label())
            continue
        except DegeneracyError as exc:
            values = (np.inf,) * len(NESTED_CHECKS)
            logger.debug("degenerate metric near %s for %s: %s", p, handle.label(), exc)
        for name, value in zip(NESTED_CHECKS, values):
            collector.add(name, value)
        collected += 1
    if not collected:
        logger.warning("no nested stencil of %s fits the domain", handle.label())
        for name in NESTED_CHECKS:
            collector.add(name, np.inf)
            collector.notes[name] = "no sampled stencil fits the domain"


def _twistor_checks(handle: ImmersionHandle, config: RunConfig) -> Dict[str, Tuple[float, float]]:
    sol = handle.twistor()
    if sol is None:
        return {}
    report = residual_report(sol, config.grid)
    return {f"twistor_{name}": report.equations[name] for name in sorted(report.declared)}


def _ledgered_failures(handle: ImmersionHandle, failing: Set[str]) -> Set[str]:
    """
    Failing checks the family ledger names. A ledgered quadric failure
    covers every other failure; any other ledgered root failure covers the
    checks downstream of the roots.
    """
    named = failing & set(handle.family.ledgered)
    if "quadric" in named:
        return set(failing)
    if named & set(ROOT_CHECKS):
        named |= failing - set(ROOT_CHECKS)
    return named


def _discrepancy_note(handle: ImmersionHandle, failing: Sequence[str]) -> str:
    family = handle.family
    if not failing:
        return ""
    suspected = family.note or "no ledger entry"
    return f"failing checks: {', '.join(failing)}; suspected transcription issue: {suspected}"


def verify_handle(handle: ImmersionHandle, config: RunConfig) -> CheckReport:
    """All applicable checks for one bound immersion."""
    family = handle.family
    grid = config.grid
    timestamp = datetime.now(timezone.utc).isoformat()
    base = dict(family=handle.label(), params=dict(handle.params), grid=grid.to_dict(), tier=family.tier.value,
                timestamp=timestamp, ledger=family.note if family.tier is Tier.B else "")
    try:
        P = handle.sample(grid)
        collector = _Collector()
        rng = np.random.default_rng(grid.seed)
        _pointwise_checks(handle, P, config, rng, collector)
        _nested_checks(handle, P, config, collector)
        reduced = collector.reduce()
        reduced.update(_twistor_checks(handle, config))
    except (SamplingError, DomainError, DegeneracyError, AdmissibilityError) as exc:
        logger.warning("verification of %s aborted: %s", handle.label(), exc)
        return CheckReport(checks=(), error=f"{type(exc).__name__}: {exc}", **base)

    exact_jets = handle.term_table() is not None
    checks = []
    for name in sorted(reduced):
        mx, rms = reduced[name]
        tol = config.tolerance(name, exact_jets)
        checks.append(CheckResult(name, mx, rms, tol, bool(mx <= tol), note=collector.notes.get(name, "")))
    failing = sorted(c.name for c in checks if not c.passed)
    if failing and family.tier is Tier.B:
        note = _discrepancy_note(handle, failing)
        ledgered = _ledgered_failures(handle, set(failing))
        marked = []
        for c in checks:
            if not c.passed:
                expected = c.name in family.expected_fail
                c = replace(c, expected_fail=expected, ledgered=c.name in ledgered,
                            note=c.note or (family.note if expected else note))
                if not (c.expected_fail or c.ledgered):
                    logger.warning("%s: unledgered tier B failure in %s (max %.3e > %.1e)", handle.label(),
                                   c.name, c.max_residual, c.tolerance)
            marked.append(c)
        checks = marked
    logger.debug("%s: %d checks, %d failing", handle.label(), len(checks), len(failing))
    return CheckReport(checks=tuple(checks), **base)


# =============================================================================
# RUNNER
# =============================================================================

def _jobs(config: RunConfig) -> List[Tuple[str, Optional[Dict[str, float]]]]:
    jobs = []
    for index, request in enumerate(config.families):
        jobs.append((request.id, request.params))
        family = get_family(request.id)
        source = get_family(family.inner_default) if family.is_composition else family
        rng = np.random.default_rng(config.grid.seed + 7919 * (index + 1))
        for _ in range(config.draws):
            jobs.append((request.id, draw_params(source.specs, source.constraints, rng)))
    return jobs


def _run_job(job, config: RunConfig) -> CheckReport:
    fid, params = job
    family = get_family(fid)
    try:
        handle = instantiate(fid, params)
    except AdmissibilityError as exc:
        return CheckReport(family=fid, params=dict(params or {}), grid=config.grid.to_dict(), checks=(),
                           tier=family.tier.value, timestamp=datetime.now(timezone.utc).isoformat(),
                           error=f"AdmissibilityError: {exc}")
    return verify_handle(handle, config)


def run_verification(config: RunConfig, single_thread: bool = False) -> List[CheckReport]:
    """
    Verify every requested family, in parallel unless single_thread is set.

    Reports are sorted by (family, params) so the result does not depend on
    completion order.
    """
    jobs = _jobs(config)
    workers = 1 if single_thread else (config.workers or worker_count())
    reports: List[CheckReport] = []
    if workers == 1 or len(jobs) <= 1:
        reports = [_run_job(job, config) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(_run_job, job, config): job for job in jobs}
            for future in as_completed(futures):
                try:
                    reports.append(future.result())
                except LabError as exc:
                    fid, params = futures[future]
                    logger.error("job %s failed: %s", fid, exc)
                    reports.append(CheckReport(family=fid, params=dict(params or {}), grid=config.grid.to_dict(),
                                               checks=(), tier=get_family(fid).tier.value, error=str(exc)))
    reports.sort(key=lambda r: (r.family, params_key(r.params)))
    return reports


# =============================================================================
# REPORTS
# =============================================================================

def exit_status(reports: Sequence[CheckReport]) -> int:
    """0 when nothing unexpected failed, 1 otherwise."""
    return EXIT_FAILED if any(r.unexpected_failures() for r in reports) else EXIT_OK


def _text_table(reports: Sequence[CheckReport]) -> str:
    lines = [f"{'family':<34} {'check':<22} {'max':>11} {'rms':>11} {'tol':>9}  status"]
    lines.append("-" * 100)
    for report in reports:
        label = report.family
        if report.error:
            lines.append(f"{label:<34} {'-':<22} {'':>11} {'':>11} {'':>9}  ERROR {report.error}")
            continue
        for c in report.checks:
            status = "ok" if c.passed else ("xfail" if c.expected_fail else ("ledger" if c.ledgered else "FAIL"))
            lines.append(f"{label:<34} {c.name:<22} {c.max_residual:>11.3e} {c.rms_residual:>11.3e} "
                         f"{c.tolerance:>9.1e}  {status}")
            label = ""
    lines.append("-" * 100)
    lines.append(f"{len(reports)} report(s), exit status {exit_status(reports)}")
    return "\n".join(lines) + "\n"


def emit_report(reports: Sequence[CheckReport], fmt: str = "json", path: Optional[str] = None,
                timestamp: bool = True) -> str:
    """
    Render reports as a JSON document or a fixed-width table, optionally
    writing it to path.

    Raises:
        ConfigError: unknown format
        OSError: path is not writable
    """
    if fmt == "json":
        document = {
            "version": VERSION,
            "exit_status": exit_status(reports),
            "reports": [r.to_dict(timestamp=timestamp) for r in reports],
        }
        text = json.dumps(document, indent=2, sort_keys=True) + "\n"
    elif fmt == "text":
        text = _text_table(reports)
    else:
        raise ConfigError(f"unknown report format '{fmt}' (json or text)")
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def parse_report(text: str) -> List[CheckReport]:
    document = json.loads(text)
    return [CheckReport.from_dict(item) for item in document.get("reports", [])]


def ledger(reports: Sequence[CheckReport]) -> List[dict]:
    """Failing Tier-B checks with their discrepancy notes."""
    out = []
    for report in reports:
        for c in report.checks:
            if not c.passed and report.tier == Tier.B.value:
                out.append({"family": report.family, "check": c.name, "note": c.note, "ledgered": c.ledgered,
                            "expected_fail": c.expected_fail or c.note.startswith(EXPECTED_FAIL_NOTE)})
    return out

