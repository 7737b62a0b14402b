#!/usr/bin/env python3
"""
HSTATIONARY LAB CONFIGURATION

Settings come from the environment (a local .env file is honoured):
1. HSTAT_WORKERS      - worker pool size for verification runs
2. HSTAT_TOL_PROFILE  - name of the default tolerance profile
3. HSTAT_LOG_LEVEL    - logging level used by the command line
"""

import os
from dataclasses import dataclass, replace
from typing import Dict

from dotenv import load_dotenv

from .errors import ConfigError

load_dotenv()

VERSION = "1.0.0"

DEFAULT_STEP = 1e-3
OUTER_STEP = 1e-2
RANK_TOL = 1e-6
DEFAULT_SEED = 20130713
DEFAULT_GRID = 50
MAX_WORKERS = 8


@dataclass(frozen=True)
class ToleranceProfile:
    """Residual tolerances tiered by the numerical method behind each check"""
    exact: float = 1e-10
    analytic: float = 1e-8
    fd: float = 1e-6
    nested: float = 1e-3
    quadrature: float = 1e-4
    codazzi: float = 1e-2

    def scaled(self, factor: float) -> "ToleranceProfile":
        return replace(
            self,
            exact=self.exact * factor,
            analytic=self.analytic * factor,
            fd=self.fd * factor,
            nested=self.nested * factor,
            quadrature=self.quadrature * factor,
            codazzi=self.codazzi * factor,
        )


TOLERANCE_PROFILES: Dict[str, ToleranceProfile] = {
    "default": ToleranceProfile(),
    "loose": ToleranceProfile().scaled(100.0),
}


def tolerance_profile(name: str = None) -> ToleranceProfile:
    """Look up a tolerance profile, falling back to HSTAT_TOL_PROFILE."""
    name = name or os.getenv("HSTAT_TOL_PROFILE", "default")
    try:
        return TOLERANCE_PROFILES[name]
    except KeyError:
        raise ConfigError(f"unknown tolerance profile '{name}' (known: {sorted(TOLERANCE_PROFILES)})")


def worker_count() -> int:
    """Worker pool size from HSTAT_WORKERS, defaulting to the CPU count."""
    raw = os.getenv("HSTAT_WORKERS")
    if raw is None:
        return max(1, min(MAX_WORKERS, os.cpu_count() or 1))
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f"HSTAT_WORKERS must be an integer, got '{raw}'")
    if workers < 1:
        raise ConfigError(f"HSTAT_WORKERS must be positive, got {workers}")
    return workers


def log_level() -> str:
    return os.getenv("HSTAT_LOG_LEVEL", "WARNING").upper()
