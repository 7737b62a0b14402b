#!/usr/bin/env python3
"""
IMMERSION FAMILY REGISTRY

Closed-form Lagrangian immersions (or their horizontal lifts) with parameter
schemas, chart domains and the properties they advertise.

This module:
1. Defines ImmersionFamily (static description) and ImmersionHandle
   (family bound to validated parameters)
2. Builds exponential-polynomial entries from cos/sin/cosh/sinh factors so
   that trigonometric families get exact jets
3. Keeps the registry and its lookup, instantiate and compose operations
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..ambient import AmbientModel, ModelKind
from ..errors import CompositionError, FamilyNotFoundError
from ..grids import Box, GridSpec, SingularLocus, check_point, sample_box
from ..jets import ExpTerm, TermTable, compile_terms, table_values
from ..params import Constraint, ParamSpec, Params, resolve_params
from ..twistor import TwistorSolution, build_solution, flat_lift_system_residual, sech_lift_system_residual

logger = logging.getLogger(__name__)

Entries = List[Tuple[ExpTerm, ...]]
Evaluator = Callable[[np.ndarray, Params], np.ndarray]
MetricFunction = Callable[[np.ndarray, Params], np.ndarray]

EXPECTED_FAIL_NOTE = "expected failure: negative control"


class Tier(Enum):
    """A: every check must pass. B: failures are ledgered with a note."""
    A = "A"
    B = "B"


def unit_scale(params: Params) -> float:
    return 1.0


@dataclass(frozen=True)
class TwistorLink:
    """Twistor solution whose f_j^2 the induced metric should reproduce"""
    solution: str
    params: Callable[[Params], Dict[str, float]] = field(repr=False)

    def build(self, params: Params) -> TwistorSolution:
        return build_solution(self.solution, self.params(params))


@dataclass(frozen=True)
class LiftSystem:
    """Second-order PDE system satisfied by a type II surface in (x, y)"""
    kind: str
    params: Callable[[Params], Dict[str, float]] = field(repr=False)

    def residual(self, jet, params: Params) -> float:
        values = self.params(params)
        if self.kind == "sech":
            return sech_lift_system_residual(jet, values["m"])
        if self.kind == "flat":
            return flat_lift_system_residual(jet, values["b"], values["m"])
        raise ValueError(f"unknown lift system '{self.kind}'")


@dataclass(frozen=True)
class Pattern:
    """
    h(d_j, d_j) = kappa J d_j and h(d_j, d_k) = 0 for k != j, for every j in
    coords. Components among the remaining coordinates are unconstrained.
    """
    coords: Tuple[int, ...]
    scale: Callable[[Params], float] = field(default=unit_scale, repr=False)


@dataclass(frozen=True)
class Shape:
    """Dimension-dependent fields of a family at one parameter set"""
    ambient: AmbientModel
    ell: int
    box: Box
    nullity: Optional[Tuple[int, int]] = None
    pattern: Optional[Pattern] = None
    unused: Tuple[str, ...] = ()


@dataclass(frozen=True)
class ImmersionFamily:
    """
    One registered family of immersions.

    Exactly one of `terms` (exponential-polynomial entries), `evaluator`
    (vectorised closed form) or `compose` (outer formula around an inner
    surface lift) produces the values.

    Families over a range of dimensions register their default dimension
    and a `reshape` that derives the ambient, chart box, nullity and
    pattern from the parameters. `ledgered` names the checks a Tier-B
    family may fail, with `note` naming the suspected transcription issue.
    """
    id: str
    source: str
    ambient: AmbientModel
    ell: int
    specs: Tuple[ParamSpec, ...]
    constraints: Tuple[Constraint, ...]
    box: Box
    terms: Optional[Callable[[Params], Entries]] = field(default=None, repr=False)
    evaluator: Optional[Evaluator] = field(default=None, repr=False)
    singular: Tuple[SingularLocus, ...] = ()
    twistor_link: Optional[TwistorLink] = None
    lift_system: Optional[LiftSystem] = None
    advertised_metric: Optional[MetricFunction] = field(default=None, repr=False)
    nullity: Optional[Tuple[int, int]] = None
    pattern: Optional[Pattern] = None
    tier: Tier = Tier.A
    note: str = ""
    variant_of: Optional[str] = None
    expected_fail: Tuple[str, ...] = ()
    manifest_key: Optional[str] = None
    compose: Optional[Callable[["ImmersionHandle", np.ndarray], np.ndarray]] = field(default=None, repr=False)
    inner_kind: Optional[ModelKind] = None
    inner_default: Optional[str] = None
    surface_type: str = ""
    reshape: Optional[Callable[[Params], Shape]] = field(default=None, repr=False)
    ledgered: Tuple[str, ...] = ()

    def __post_init__(self):
        producers = sum(x is not None for x in (self.terms, self.evaluator, self.compose))
        if producers != 1:
            raise ValueError(f"family {self.id} needs exactly one of terms, evaluator, compose")
        if len(self.box) != self.n:
            raise ValueError(f"family {self.id}: box has {len(self.box)} axes, ambient n={self.n}")

    @property
    def n(self) -> int:
        return self.ambient.n

    @property
    def m(self) -> int:
        return self.ambient.m

    @property
    def is_composition(self) -> bool:
        return self.compose is not None

    @property
    def variable_dimension(self) -> bool:
        return self.reshape is not None

    def specialize(self, params: Params) -> Tuple["ImmersionFamily", Params]:
        """The family at the dimension the parameters select, with unused parameters dropped."""
        if self.reshape is None:
            return self, params
        shape = self.reshape(params)
        family = replace(self, ambient=shape.ambient, ell=shape.ell, box=shape.box, nullity=shape.nullity,
                         pattern=shape.pattern, reshape=None)
        return family, {k: v for k, v in params.items() if k not in shape.unused}

    def summary(self) -> dict:
        return {
            "id": self.id,
            "source": self.source,
            "ambient": self.ambient.kind.value,
            "epsilon": self.ambient.epsilon,
            "n": self.n,
            "m": self.m,
            "ell": self.ell,
            "tier": self.tier.value,
            "params": [spec.to_dict() for spec in self.specs],
            "constraints": [c.predicate for c in self.constraints],
            "domain": [list(b) for b in self.box],
            "singular": [locus.name for locus in self.singular],
            "twistor": self.twistor_link.solution if self.twistor_link else None,
            "nullity": list(self.nullity) if self.nullity else None,
            "variant_of": self.variant_of,
            "inner": self.inner_default,
            "variable_dimension": self.variable_dimension,
            "ledgered": list(self.ledgered),
            "notes": self.note,
        }


@dataclass(frozen=True)
class ImmersionHandle:
    """A family bound to validated parameters (and an inner lift when composed)"""
    family: ImmersionFamily
    params: Params
    box: Box
    singular: Tuple[SingularLocus, ...] = ()
    inner: Optional["ImmersionHandle"] = None

    @cached_property
    def _table(self) -> Optional[TermTable]:
        if self.family.terms is None:
            return None
        return compile_terms(self.family.terms(self.params), self.family.n)

    def term_table(self) -> Optional[TermTable]:
        return self._table

    def evaluate(self, P: np.ndarray) -> np.ndarray:
        P = np.atleast_2d(np.asarray(P, dtype=float))
        if self.family.compose is not None:
            return self.family.compose(self.inner, P)
        if self._table is not None:
            return table_values(self._table, P)
        return np.asarray(self.family.evaluator(P, self.params), dtype=complex)

    def check_point(self, p: np.ndarray, margin: float = 0.0):
        check_point(self.box, self.singular, self.params, p, margin)

    def sample(self, grid: GridSpec) -> np.ndarray:
        return sample_box(self.box, self.singular, self.params, grid)

    def twistor(self) -> Optional[TwistorSolution]:
        link = self.family.twistor_link
        return link.build(self.params) if link else None

    def label(self) -> str:
        if self.inner is not None:
            return f"{self.family.id}[{self.inner.label()}]"
        return self.family.id

    def summary(self) -> dict:
        return {
            "id": self.family.id,
            "params": dict(self.params),
            "inner": self.inner.summary() if self.inner else None,
        }


# =============================================================================
# EXPONENTIAL-POLYNOMIAL BUILDERS
# =============================================================================

def _zeros(n: int) -> Tuple[int, ...]:
    return (0,) * n


def const(value: complex, n: int) -> Tuple[ExpTerm, ...]:
    return (ExpTerm(complex(value), (0j,) * n, _zeros(n)),)


def exp_of(rates: Sequence[complex], coefficient: complex = 1.0) -> Tuple[ExpTerm, ...]:
    return (ExpTerm(complex(coefficient), tuple(complex(r) for r in rates), _zeros(len(rates))),)


def monomial(powers: Sequence[int], coefficient: complex = 1.0) -> Tuple[ExpTerm, ...]:
    return (ExpTerm(complex(coefficient), (0j,) * len(powers), tuple(int(p) for p in powers)),)


def _pair(rates: Sequence[float], unit: complex, plus: complex, minus: complex) -> Tuple[ExpTerm, ...]:
    r = np.asarray(rates, dtype=complex) * unit
    n = len(rates)
    return (ExpTerm(plus, tuple(r), _zeros(n)), ExpTerm(minus, tuple(-r), _zeros(n)))


def cos_of(rates: Sequence[float]) -> Tuple[ExpTerm, ...]:
    return _pair(rates, 1j, 0.5, 0.5)


def sin_of(rates: Sequence[float]) -> Tuple[ExpTerm, ...]:
    return _pair(rates, 1j, -0.5j, 0.5j)


def cosh_of(rates: Sequence[float]) -> Tuple[ExpTerm, ...]:
    return _pair(rates, 1.0, 0.5, 0.5)


def sinh_of(rates: Sequence[float]) -> Tuple[ExpTerm, ...]:
    return _pair(rates, 1.0, 0.5, -0.5)


def times(*factors: Sequence[ExpTerm]) -> Tuple[ExpTerm, ...]:
    """Product of sums of terms, expanded."""
    out = tuple(factors[0])
    for factor in factors[1:]:
        out = tuple(
            ExpTerm(
                a.coefficient * b.coefficient,
                tuple(x + y for x, y in zip(a.rates, b.rates)),
                tuple(x + y for x, y in zip(a.powers, b.powers)),
            )
            for a in out
            for b in factor
        )
    return out


def plus(*sums: Sequence[ExpTerm]) -> Tuple[ExpTerm, ...]:
    return tuple(term for s in sums for term in s)


def scaled(value: complex, terms: Sequence[ExpTerm]) -> Tuple[ExpTerm, ...]:
    return tuple(ExpTerm(value * t.coefficient, t.rates, t.powers) for t in terms)


def axis(n: int, index: int, rate: float = 1.0) -> Tuple[float, ...]:
    """Rate vector rate * e_index over n coordinates."""
    out = [0.0] * n
    out[index] = rate
    return tuple(out)


def linear(n: int, index: int, coefficient: complex = 1.0) -> Tuple[ExpTerm, ...]:
    """coefficient * x_index as a term."""
    return monomial(tuple(int(k == index) for k in range(n)), coefficient)


def unit_block(n: int, index: int, a: float, odd: bool = False):
    """
    Legendrian curve of S^3 in coordinate x = x_index with |dB/dx| = a:
    (2a P sin(beta x/2)/beta, P(cos(beta x/2) - i sin(beta x/2)/beta)),
    P = e^{ix/2}, beta = sqrt(1+4a^2). The odd block swaps the second entry
    for P(sin/beta + i cos).
    """
    beta = np.sqrt(1.0 + 4.0 * a * a)
    phase = exp_of(axis(n, index, 0.5j))
    s = times(phase, sin_of(axis(n, index, beta / 2.0)))
    c = times(phase, cos_of(axis(n, index, beta / 2.0)))
    first = scaled(2.0 * a / beta, s)
    if odd:
        second = plus(scaled(1.0 / beta, s), scaled(1j, c))
    else:
        second = plus(c, scaled(-1j / beta, s))
    return first, second


def sphere_weights(n: int, angles: Sequence[int], count: int) -> List[Tuple[ExpTerm, ...]]:
    """
    Weights of the unit sphere S^{count-1} in the given angle coordinates:
    sin a_1, cos a_1 sin a_2, ..., cos a_1 ... cos a_{count-1}.
    """
    if len(angles) != count - 1:
        raise ValueError(f"{count} sphere weights need {count - 1} angles, got {len(angles)}")
    weights = []
    prefix = const(1.0, n)
    for idx in angles:
        weights.append(times(prefix, sin_of(axis(n, idx))))
        prefix = times(prefix, cos_of(axis(n, idx)))
    weights.append(prefix)
    return weights


def sphere_weight_values(P: np.ndarray, angles: Sequence[int]) -> np.ndarray:
    """Numeric sphere weights (k, len(angles)+1) at chart points."""
    k = P.shape[0]
    out = np.empty((k, len(angles) + 1))
    prefix = np.ones(k)
    for j, idx in enumerate(angles):
        out[:, j] = prefix * np.sin(P[:, idx])
        prefix = prefix * np.cos(P[:, idx])
    out[:, -1] = prefix
    return out


def round_metric(P: np.ndarray, angles: Sequence[int], n: int) -> np.ndarray:
    """d a_1^2 + cos^2 a_1 d a_2^2 + ... in the given angle slots, shape (k, n, n)."""
    g = np.zeros((P.shape[0], n, n))
    prefix = np.ones(P.shape[0])
    for idx in angles:
        g[:, idx, idx] = prefix
        prefix = prefix * np.cos(P[:, idx]) ** 2
    return g


def default_shape(reshape: Callable[[Params], Shape], specs: Sequence[ParamSpec]) -> dict:
    """Registration fields of a variable-dimension family at its default parameters."""
    shape = reshape({spec.name: spec.default for spec in specs})
    return dict(ambient=shape.ambient, ell=shape.ell, box=shape.box, nullity=shape.nullity, pattern=shape.pattern,
                reshape=reshape)


def clearance(name: str, func: Callable[[np.ndarray, Mapping[str, float]], np.ndarray]) -> SingularLocus:
    return SingularLocus(name, func)


# =============================================================================
# REGISTRY
# =============================================================================

FAMILIES: Dict[str, ImmersionFamily] = {}


def register(family: ImmersionFamily) -> ImmersionFamily:
    if family.id in FAMILIES:
        raise ValueError(f"family id '{family.id}' registered twice")
    if family.variant_of is not None and family.tier is not Tier.B:
        raise ValueError(f"variant {family.id} must be tier B")
    if (family.ledgered or family.expected_fail) and family.tier is not Tier.B:
        raise ValueError(f"tier A family {family.id} cannot excuse failing checks")
    if (family.ledgered or family.expected_fail) and not family.note:
        raise ValueError(f"family {family.id} excuses checks without a note naming the issue")
    FAMILIES[family.id] = family
    return family


def get_family(fid: str) -> ImmersionFamily:
    try:
        return FAMILIES[fid]
    except KeyError:
        raise FamilyNotFoundError(fid)


def list_families(ambient: Optional[str] = None, tier: Optional[str] = None, dim: Optional[int] = None,
                  include_variants: bool = True) -> List[dict]:
    """
    Family summaries sorted by id.

    Args:
        ambient: "flat", "spherical-lift" or "hyperbolic-lift"
        tier: "A" or "B"
        dim: intrinsic dimension n
        include_variants: keep printed-reading variants
    """
    out = []
    for fam in sorted(FAMILIES.values(), key=lambda f: f.id):
        if ambient is not None and fam.ambient.kind.value != ambient:
            continue
        if tier is not None and fam.tier.value != tier:
            continue
        if dim is not None and fam.n != dim:
            continue
        if not include_variants and fam.variant_of is not None:
            continue
        out.append(fam.summary())
    return out


def instantiate(fid: str, params: Optional[Mapping[str, float]] = None) -> ImmersionHandle:
    """
    Bind a family to validated parameters.

    Composition families forward the parameters to their default inner
    surface. Families over a range of dimensions are specialised to the
    dimension the parameters select.

    Raises:
        FamilyNotFoundError: unknown id
        AdmissibilityError: a parameter predicate fails
    """
    family = get_family(fid)
    if family.is_composition:
        return compose_with_inner(fid, instantiate(family.inner_default, params))
    resolved = resolve_params(family.specs, family.constraints, params)
    family, resolved = family.specialize(resolved)
    logger.debug("instantiated %s (n=%d) with %s", fid, family.n, resolved)
    return ImmersionHandle(family, resolved, family.box, family.singular)


def sample_domain(handle: ImmersionHandle, grid: GridSpec) -> np.ndarray:
    return handle.sample(grid)


def _shifted(locus: SingularLocus) -> SingularLocus:
    return SingularLocus(locus.name, lambda P, q, _f=locus.clearance: _f(P[:, 1:], q))


def compose_with_inner(outer_id: str, inner: ImmersionHandle) -> ImmersionHandle:
    """
    Composition family around an inner surface lift.

    The chart is (x, inner chart); the outer family owns the x interval.

    Raises:
        CompositionError: the inner lift lives in the wrong ambient or is not a surface
    """
    outer = get_family(outer_id)
    if not outer.is_composition:
        raise CompositionError(f"{outer_id} is not a composition family")
    if inner.family.ambient.kind is not outer.inner_kind:
        raise CompositionError(
            f"{outer_id} needs an inner lift in {outer.inner_kind.value}, "
            f"got {inner.family.id} in {inner.family.ambient.kind.value}"
        )
    if inner.family.n != 2:
        raise CompositionError(f"{outer_id} needs an inner surface, got n={inner.family.n}")
    if inner.family.surface_type != "II":
        raise CompositionError(f"{outer_id} needs a type II surface lift, got {inner.family.id}")
    box = (outer.box[0],) + tuple(inner.box)
    singular = tuple(_shifted(locus) for locus in inner.singular)
    return ImmersionHandle(outer, dict(inner.params), box, singular, inner)
