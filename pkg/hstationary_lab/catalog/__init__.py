"""
Registry of closed-form H-stationary Lagrangian immersions.

Importing the package registers every family of the flat, projective and
hyperbolic modules.
"""

from .base import (
    EXPECTED_FAIL_NOTE, FAMILIES, ImmersionFamily, ImmersionHandle, LiftSystem, Pattern, Tier, TwistorLink,
    compose_with_inner, get_family, instantiate, list_families, sample_domain,
)
from . import flat, projective, hyperbolic  # noqa: F401  (registration side effects)
from .manifest import MANIFEST_ITEMS, coverage_problems, manifest_coverage, manifest_document, manifest_json

__all__ = [
    "EXPECTED_FAIL_NOTE",
    "FAMILIES",
    "ImmersionFamily",
    "ImmersionHandle",
    "LiftSystem",
    "Pattern",
    "MANIFEST_ITEMS",
    "Tier",
    "TwistorLink",
    "compose_with_inner",
    "coverage_problems",
    "get_family",
    "instantiate",
    "list_families",
    "manifest_coverage",
    "manifest_document",
    "manifest_json",
    "sample_domain",
]
