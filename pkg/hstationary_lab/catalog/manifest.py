#!/usr/bin/env python3
"""
CATALOG MANIFEST

The list of closed-form items every registry build must cover, and the JSON
manifest document exported by `catalog list --json`.
"""

import json
from typing import Dict, List, Tuple

from ..config import VERSION
from .base import FAMILIES, list_families

MANIFEST_ITEMS: Tuple[str, ...] = (
    # flat warped families
    "cn-warped:a", "cn-warped:b",
    # constant curvature one in CP^n
    "cpn-warped:a", "cpn-warped:b",
    # constant curvature -1 in CH^n
    *(f"chn-warped:{k}" for k in range(1, 22)),
    # type I surfaces
    "cp2-type1", "c2-type1:torus", "c2-type1:spiral",
    *(f"ch2-type1:{k}" for k in range(1, 6)),
    # type II surfaces
    "cp2-type2:sech", "c2-type2:exp", "c2-type2:bessel",
    *(f"ch2-type2:{k}" for k in "abcde"),
    # positive relative nullity in dimension three
    *(f"cp3-nullity:{k}" for k in range(1, 6)),
    *(f"ch3-nullity:{k}" for k in range(1, 11)),
)


def manifest_coverage() -> Dict[str, List[str]]:
    """
    Map every manifest item to the registered family ids carrying its key.

    Variants never carry a key, so full coverage means each list has exactly
    one id and no registered key is missing from MANIFEST_ITEMS.
    """
    coverage: Dict[str, List[str]] = {item: [] for item in MANIFEST_ITEMS}
    for fam in sorted(FAMILIES.values(), key=lambda f: f.id):
        if fam.manifest_key is None:
            continue
        coverage.setdefault(fam.manifest_key, []).append(fam.id)
    return coverage


def coverage_problems() -> List[str]:
    """Human-readable coverage defects; empty when the mapping is one-to-one."""
    problems = []
    for item, ids in manifest_coverage().items():
        if item not in MANIFEST_ITEMS:
            problems.append(f"{item}: registered by {ids} but not a manifest item")
        elif len(ids) != 1:
            problems.append(f"{item}: expected one family, found {ids or 'none'}")
    return problems


def manifest_document(**filters) -> dict:
    """Registry manifest: one summary per family plus the item coverage map."""
    families = list_families(**filters)
    keys = {fam.id: fam.manifest_key for fam in FAMILIES.values()}
    for summary in families:
        summary["item"] = keys[summary["id"]]
    return {
        "version": VERSION,
        "count": len(families),
        "families": families,
        "items": {item: ids for item, ids in manifest_coverage().items()},
    }


def manifest_json(**filters) -> str:
    return json.dumps(manifest_document(**filters), indent=2, sort_keys=True)
