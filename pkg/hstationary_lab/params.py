#!/usr/bin/env python3
"""
PARAMETER SCHEMAS

Named real parameters with sampling ranges and admissibility predicates,
shared by immersion families and twistor solutions.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Optional, Sequence

import numpy as np

from .errors import AdmissibilityError

logger = logging.getLogger(__name__)

Params = Dict[str, float]


@dataclass(frozen=True)
class ParamSpec:
    """One named parameter; low/high bound random draws, not admissibility"""
    name: str
    default: float
    low: Optional[float] = None
    high: Optional[float] = None
    description: str = ""

    def draw(self, rng: np.random.Generator) -> float:
        if self.low is None or self.high is None:
            return self.default
        return float(rng.uniform(self.low, self.high))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "default": self.default,
            "range": [self.low, self.high],
            "description": self.description,
        }


@dataclass(frozen=True)
class Constraint:
    """Admissibility predicate with the source condition it encodes"""
    predicate: str
    source: str
    check: Callable[[Mapping[str, float]], bool]

    def holds(self, params: Mapping[str, float]) -> bool:
        try:
            return bool(self.check(params))
        except (ValueError, ZeroDivisionError, KeyError):
            return False


def positive(*names: str) -> Constraint:
    """Constraint that each named parameter is strictly positive."""
    text = ", ".join(names) + " > 0"
    return Constraint(text, text, lambda p: all(p[name] > 0 for name in names))


def whole(name: str, low: int, high: int) -> Constraint:
    """Constraint that a parameter is an integer in [low, high]."""
    text = f"{name} integer in [{low}, {high}]"
    return Constraint(text, text, lambda p: float(p[name]).is_integer() and low <= p[name] <= high)


def resolve_params(specs: Sequence[ParamSpec], constraints: Sequence[Constraint],
                   given: Optional[Mapping[str, float]] = None) -> Params:
    """
    Fill defaults, reject unknown names and run every constraint.

    Raises:
        AdmissibilityError: unknown parameter or violated predicate
    """
    given = dict(given or {})
    known = {spec.name for spec in specs}
    unknown = sorted(set(given) - known)
    if unknown:
        raise AdmissibilityError(f"unknown parameters {unknown}", f"expected a subset of {sorted(known)}")
    params = {spec.name: float(given.get(spec.name, spec.default)) for spec in specs}
    for name, value in params.items():
        if not np.isfinite(value):
            raise AdmissibilityError(f"{name} must be finite")
    for constraint in constraints:
        if not constraint.holds(params):
            raise AdmissibilityError(constraint.predicate, constraint.source)
    return params


def draw_params(specs: Sequence[ParamSpec], constraints: Sequence[Constraint],
                rng: np.random.Generator, attempts: int = 200) -> Params:
    """Random admissible parameter set; falls back to the defaults."""
    for _ in range(attempts):
        candidate = {spec.name: spec.draw(rng) for spec in specs}
        if all(c.holds(candidate) for c in constraints):
            return candidate
    logger.warning("no admissible random draw after %d attempts, using defaults", attempts)
    return resolve_params(specs, constraints)


def params_key(params: Mapping[str, float]) -> tuple:
    return tuple(sorted(params.items()))
