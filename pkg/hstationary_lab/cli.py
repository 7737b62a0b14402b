#!/usr/bin/env python3
"""
HSTATIONARY LAB COMMAND LINE

    hstationary-lab catalog list [--json] [--ambient A] [--tier T] [--dim N]
    hstationary-lab catalog describe <id>
    hstationary-lab verify <id>... [--param k=v] [--grid N] [--seed S]
    hstationary-lab twistor list | residual --solution <id> [--scale-m M]
    hstationary-lab variation <id> --center x,y --radius r
    hstationary-lab bessel --nu-re A --nu-im B --z C [--integral R]
    hstationary-lab sweep --config run.json [--out FILE]

Exit status is 0 when every required check passed, 1 when a Tier-A check
(or an unledgered Tier-B check) failed and 2 for usage errors.
"""

import argparse
import json
import logging
import sys
from typing import Dict, List, Optional, Sequence

import numpy as np

from .catalog import get_family, instantiate, list_families, manifest_json
from .config import DEFAULT_GRID, DEFAULT_SEED, TOLERANCE_PROFILES, VERSION, log_level
from .diffgeo import Bump, first_variation
from .errors import (
    AdmissibilityError, CompositionError, ConfigError, DomainError, FamilyNotFoundError, LabError, SupportError,
    UnsupportedModelError,
)
from .grids import GridSpec
from .specfun import bessel_j, fresnel_bessel_integral, fresnel_bessel_series
from .twistor import ScaleMode, build_solution, list_solutions, residual_report, scale_transform
from .verify import EXIT_USAGE, FamilyRequest, RunConfig, emit_report, exit_status, run_verification

logger = logging.getLogger(__name__)

USAGE_ERRORS = (ConfigError, FamilyNotFoundError, AdmissibilityError, CompositionError, SupportError,
                UnsupportedModelError, DomainError)


def banner(title: str):
    print("=" * 70)
    print(title)
    print("=" * 70)


def parse_params(items: Optional[Sequence[str]]) -> Optional[Dict[str, float]]:
    """['a=1.5', 'm=2'] -> {'a': 1.5, 'm': 2.0}"""
    if not items:
        return None
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"parameters are given as name=value, got '{item}'")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"parameter {key} needs a number, got '{value}'")
    return out


def parse_vector(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got '{text}'")


# =============================================================================
# SUBCOMMANDS
# =============================================================================

def cmd_catalog(args) -> int:
    filters = dict(ambient=args.ambient, tier=args.tier, dim=args.dim, include_variants=not args.no_variants)
    if args.action == "describe":
        if not args.id:
            raise ConfigError("catalog describe needs a family id")
        family = get_family(args.id)
        print(json.dumps(family.summary(), indent=2, sort_keys=True))
        return 0
    if args.json:
        print(manifest_json(**filters))
        return 0
    families = list_families(**filters)
    banner(f"H-STATIONARY CATALOG ({len(families)} families)")
    for summary in families:
        variant = f"  variant of {summary['variant_of']}" if summary["variant_of"] else ""
        print(f"{summary['id']:<30} {summary['ambient']:<16} n={summary['n']} tier {summary['tier']}{variant}")
    return 0


def _grid(args) -> GridSpec:
    return GridSpec(count=args.grid, seed=args.seed)


def cmd_verify(args) -> int:
    params = parse_params(args.param)
    requests = tuple(FamilyRequest(fid, params) for fid in args.ids)
    config = RunConfig(families=requests, grid=_grid(args), tolerance_profile=args.tol_profile,
                       output=args.out, draws=args.draws, nested_points=args.nested_points)
    reports = run_verification(config, single_thread=args.single_thread)
    text = emit_report(reports, args.format, args.out)
    if args.out:
        print(f"wrote {len(reports)} report(s) to {args.out}")
    else:
        sys.stdout.write(text)
    return exit_status(reports)


def cmd_sweep(args) -> int:
    config = RunConfig.from_file(args.config)
    banner(f"VERIFICATION SWEEP: {len(config.families)} families")
    reports = run_verification(config, single_thread=args.single_thread)
    out = args.out or config.output
    emit_report(reports, "json", out)
    sys.stdout.write(emit_report(reports, "text"))
    if out:
        print(f"JSON report written to {out}")
    return exit_status(reports)


def cmd_twistor(args) -> int:
    if args.action == "list":
        for item in list_solutions():
            print(f"{item['id']:<16} {item['description']}")
        return 0
    if not args.solution:
        raise ConfigError("twistor residual needs --solution")
    sol = build_solution(args.solution, parse_params(args.param))
    if args.scale_m is not None:
        sol = scale_transform(sol, args.scale_m, args.scale_c, ScaleMode(args.scale_mode))
    report = residual_report(sol, _grid(args))
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    tolerance = TOLERANCE_PROFILES[args.tol_profile].analytic
    return 0 if report.max_declared() <= tolerance else 1


def cmd_variation(args) -> int:
    handle = instantiate(args.id, parse_params(args.param))
    bump = Bump(tuple(parse_vector(args.center)), args.radius, args.amplitude)
    result = first_variation(handle, bump, nodes=args.nodes)
    gap = abs(result.dvol - result.predicted)
    print(json.dumps({
        "family": handle.label(),
        "params": dict(handle.params),
        "bump": {"center": list(bump.center), "radius": bump.radius, "amplitude": bump.amplitude},
        "dvol_dt": result.dvol,
        "predicted": result.predicted,
        "gap": gap,
    }, indent=2, sort_keys=True))
    tolerance = TOLERANCE_PROFILES[args.tol_profile].quadrature
    return 0 if gap <= tolerance * max(1.0, abs(result.predicted)) else 1


def cmd_bessel(args) -> int:
    nu = complex(args.nu_re, args.nu_im)
    out = {"nu": [nu.real, nu.imag]}
    if args.z is not None:
        value, err = bessel_j(nu, complex(args.z))
        out["J"] = [value.real, value.imag]
        out["truncation"] = err
    if args.integral is not None:
        quad = fresnel_bessel_integral(nu, args.integral)
        series = fresnel_bessel_series(nu, args.integral)
        out["integral"] = {"quadrature": [quad.real, quad.imag], "series": [series.real, series.imag],
                           "gap": float(np.abs(quad - series))}
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


# =============================================================================
# PARSER
# =============================================================================

def _add_grid_args(parser: argparse.ArgumentParser):
    parser.add_argument("--grid", type=int, default=DEFAULT_GRID, help="number of sampled chart points")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="sampling seed")
    parser.add_argument("--tol-profile", default="default", choices=sorted(TOLERANCE_PROFILES))
    parser.add_argument("--param", action="append", metavar="NAME=VALUE", help="family or solution parameter")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hstationary-lab",
                                     description="Verification lab for H-stationary Lagrangian immersions")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    catalog = sub.add_parser("catalog", help="list or describe registered families")
    catalog.add_argument("action", choices=["list", "describe"])
    catalog.add_argument("id", nargs="?")
    catalog.add_argument("--json", action="store_true", help="print the JSON manifest")
    catalog.add_argument("--ambient", choices=["flat", "spherical-lift", "hyperbolic-lift"])
    catalog.add_argument("--tier", choices=["A", "B"])
    catalog.add_argument("--dim", type=int)
    catalog.add_argument("--no-variants", action="store_true", help="hide printed-reading variants")
    catalog.set_defaults(handler=cmd_catalog)

    verify = sub.add_parser("verify", help="run every applicable check on some families")
    verify.add_argument("ids", nargs="+")
    _add_grid_args(verify)
    verify.add_argument("--out", help="write the report to a file")
    verify.add_argument("--format", default="json", choices=["json", "text"])
    verify.add_argument("--draws", type=int, default=0, help="extra random admissible parameter sets")
    verify.add_argument("--nested-points", type=int, help="points used by the stencil checks")
    verify.add_argument("--single-thread", action="store_true")
    verify.set_defaults(handler=cmd_verify)

    sweep = sub.add_parser("sweep", help="verify what a JSON run config names")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--out")
    sweep.add_argument("--single-thread", action="store_true")
    sweep.set_defaults(handler=cmd_sweep)

    twistor = sub.add_parser("twistor", help="twistor solutions and their PDE residuals")
    twistor.add_argument("action", choices=["list", "residual"])
    twistor.add_argument("--solution")
    _add_grid_args(twistor)
    twistor.add_argument("--scale-m", type=float)
    twistor.add_argument("--scale-c", type=float, default=1.0)
    twistor.add_argument("--scale-mode", default="stretch", choices=[mode.value for mode in ScaleMode])
    twistor.set_defaults(handler=cmd_twistor)

    variation = sub.add_parser("variation", help="first variation of volume under a Hamiltonian bump")
    variation.add_argument("id")
    variation.add_argument("--center", required=True, help="comma-separated chart point")
    variation.add_argument("--radius", type=float, required=True)
    variation.add_argument("--amplitude", type=float, default=1.0)
    variation.add_argument("--nodes", type=int, default=40)
    variation.add_argument("--param", action="append", metavar="NAME=VALUE")
    variation.add_argument("--tol-profile", default="default", choices=sorted(TOLERANCE_PROFILES))
    variation.set_defaults(handler=cmd_variation)

    bessel = sub.add_parser("bessel", help="complex-order Bessel values and the Bessel-surface integral")
    bessel.add_argument("--nu-re", type=float, required=True)
    bessel.add_argument("--nu-im", type=float, default=0.0)
    bessel.add_argument("--z", type=complex)
    bessel.add_argument("--integral", type=float, metavar="R", help="upper limit of the t e^{it^2} J(t^2) integral")
    bessel.set_defaults(handler=cmd_bessel)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level="DEBUG" if args.verbose else log_level(),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LabError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
