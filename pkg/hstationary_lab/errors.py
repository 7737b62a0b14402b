#!/usr/bin/env python3
"""
HSTATIONARY LAB ERRORS

Every failure the lab can raise derives from LabError, so callers can catch
the whole family at once. The kinds that signal bad input also derive from
ValueError.
"""

from typing import Optional


class LabError(Exception):
    """Root of all lab errors"""


class DimensionError(LabError, ValueError):
    """Vectors or jets with incompatible lengths or signatures"""


class UnsupportedModelError(LabError):
    """Operation not defined for the given ambient model"""


class DomainError(LabError, ValueError):
    """Chart point outside the admissible domain"""

    def __init__(self, predicate: str, point=None):
        self.predicate = predicate
        self.point = point
        where = f" at {tuple(point)}" if point is not None else ""
        super().__init__(f"domain predicate violated{where}: {predicate}")


class AdmissibilityError(LabError, ValueError):
    """Parameter set violates a family constraint"""

    def __init__(self, predicate: str, constraint: str = ""):
        self.predicate = predicate
        self.constraint = constraint
        detail = f" ({constraint})" if constraint else ""
        super().__init__(f"inadmissible parameters: {predicate}{detail}")


class FamilyNotFoundError(LabError, KeyError):
    """Unknown family or solution id"""

    def __str__(self):
        return f"unknown id: {self.args[0]}" if self.args else "unknown id"


class SamplingError(LabError):
    """No feasible chart points under the requested margin"""


class CompositionError(LabError):
    """Outer and inner families cannot be composed"""


class DegeneracyError(LabError):
    """Induced metric is not positive definite"""

    def __init__(self, min_eigenvalue: float):
        self.min_eigenvalue = min_eigenvalue
        super().__init__(f"degenerate induced metric, min eigenvalue {min_eigenvalue:.3e}")


class PoleError(LabError, ValueError):
    """Gamma function evaluated at a pole"""


class ConvergenceError(LabError):
    """Series did not converge within its term budget"""

    def __init__(self, terms: int, last_term: Optional[float] = None):
        self.terms = terms
        self.last_term = last_term
        super().__init__(f"series not converged after {terms} terms (last term {last_term})")


class QuadratureError(LabError):
    """Adaptive quadrature exhausted its subdivision budget"""

    def __init__(self, intervals: int, estimate: float):
        self.intervals = intervals
        self.estimate = estimate
        super().__init__(f"quadrature tolerance unreachable with {intervals} intervals (error estimate {estimate:.3e})")


class SupportError(LabError):
    """Bump support touches the sampled patch boundary"""


class ConfigError(LabError):
    """Invalid run configuration or command-line usage"""
