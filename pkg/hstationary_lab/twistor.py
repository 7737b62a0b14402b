#!/usr/bin/env python3
"""
TWISTOR SOLUTIONS

Twisted and warped product decompositions g = f_1^2 dx_1^2 + ... + f_l^2 dx_l^2 + g_0
and the PDE system their twistor functions must satisfy.

This module:
1. Registers closed-form twistor solutions with hand-coded partials
2. Evaluates the twisted-closed, H-stationary and curvature residuals
3. Rescales solutions (stretch x -> m^2 x, or turn a unit-speed wave
   into a traveling wave of speed m^2)
4. Checks lift PDE systems satisfied by the adapted surfaces
5. Separates type I (f^2 = k^2) from type II solutions
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .config import DEFAULT_GRID, DEFAULT_SEED
from .errors import AdmissibilityError, DimensionError, FamilyNotFoundError
from .grids import Box, GridSpec, SamplingMode, SingularLocus, check_point, sample_box
from .jets import Jet2
from .params import Constraint, ParamSpec, Params, positive, resolve_params

logger = logging.getLogger(__name__)

HSTATIONARY = "hstationary"
TWISTED_CLOSED = "twisted_closed"
CURVATURE = "curvature"
ALL_EQUATIONS = frozenset({HSTATIONARY, TWISTED_CLOSED, CURVATURE})

JetArrays = Tuple[np.ndarray, np.ndarray, np.ndarray]
JetFunction = Callable[[np.ndarray], JetArrays]


# =============================================================================
# WAVE PROFILES
# =============================================================================

def _sech(w):
    return 1.0 / np.cosh(w)


def _sec(w):
    return 1.0 / np.cos(w)


def _csch(w):
    return 1.0 / np.sinh(w)


# profile -> (W, W', W'')
PROFILES: Dict[str, Tuple[Callable, Callable, Callable]] = {
    "sech": (
        _sech,
        lambda w: -_sech(w) * np.tanh(w),
        lambda w: _sech(w) * (np.tanh(w) ** 2 - _sech(w) ** 2),
    ),
    "sec": (
        _sec,
        lambda w: _sec(w) * np.tan(w),
        lambda w: _sec(w) * (np.tan(w) ** 2 + _sec(w) ** 2),
    ),
    "csch": (
        _csch,
        lambda w: -_csch(w) / np.tanh(w),
        lambda w: _csch(w) * (1.0 / np.tanh(w) ** 2 + _csch(w) ** 2),
    ),
    "exp": (np.exp, np.exp, np.exp),
    "inv": (
        lambda w: 1.0 / w,
        lambda w: -1.0 / w ** 2,
        lambda w: 2.0 / w ** 3,
    ),
}


@dataclass(frozen=True)
class WaveShape:
    """f = A W(alpha x + beta y), k = B W(alpha x + beta y)"""
    profile: str
    A: float
    B: float
    alpha: float
    beta: float

    @property
    def unit_speed(self) -> bool:
        return abs(abs(self.A) - abs(self.B)) < 1e-14 * max(1.0, abs(self.A)) and self.alpha == self.beta


def wave_jet(shape: WaveShape) -> JetFunction:
    W, dW, ddW = PROFILES[shape.profile]
    direction = np.array([shape.alpha, shape.beta])
    outer = np.outer(direction, direction)
    amplitudes = np.array([shape.A, shape.B])

    def jet(P: np.ndarray) -> JetArrays:
        w = P[:, 0] * shape.alpha + P[:, 1] * shape.beta
        vals = W(w)[:, None] * amplitudes
        grads = (dW(w)[:, None, None] * amplitudes[None, :, None]) * direction
        hess = (ddW(w)[:, None, None, None] * amplitudes[None, :, None, None]) * outer
        return vals, grads, hess

    return jet


def _log_jet(scale: float, phi: np.ndarray, dphi: np.ndarray, ddphi: np.ndarray) -> JetArrays:
    """Jet of scale * exp(phi) from the jet of phi (shapes (k,), (k,n), (k,n,n))."""
    value = scale * np.exp(phi)
    grad = value[:, None] * dphi
    hess = value[:, None, None] * (ddphi + dphi[:, :, None] * dphi[:, None, :])
    return value, grad, hess


def _stack(*jets: JetArrays) -> JetArrays:
    return (
        np.stack([j[0] for j in jets], axis=1),
        np.stack([j[1] for j in jets], axis=1),
        np.stack([j[2] for j in jets], axis=1),
    )


# =============================================================================
# SOLUTION OBJECTS
# =============================================================================

@dataclass(frozen=True)
class TwistorSolution:
    """
    Twistor functions f_1..f_l of a twisted product chart.

    `declared` lists the equations the solution is claimed to satisfy;
    `jet` returns analytic values, gradients and Hessians over all n
    chart coordinates. The functions must not vanish on the domain.
    """
    id: str
    ell: int
    n: int
    epsilon: int
    params: Params
    declared: FrozenSet[str]
    box: Box
    jet: JetFunction = field(repr=False, compare=False)
    singular: Tuple[SingularLocus, ...] = ()
    wave: Optional[WaveShape] = None
    note: str = ""

    def values(self, P: np.ndarray) -> np.ndarray:
        return self.jet(np.atleast_2d(np.asarray(P, dtype=float)))[0]

    def check_point(self, p: np.ndarray, margin: float = 0.0):
        check_point(self.box, self.singular, self.params, p, margin)

    def sample(self, grid: GridSpec) -> np.ndarray:
        return sample_box(self.box, self.singular, self.params, grid)

    def summary(self) -> dict:
        return {
            "id": self.id,
            "ell": self.ell,
            "n": self.n,
            "epsilon": self.epsilon,
            "params": dict(self.params),
            "declared": sorted(self.declared),
            "domain": [list(b) for b in self.box],
            "note": self.note,
        }


@dataclass(frozen=True)
class SolutionFamily:
    """Builder for a parametrised twistor solution"""
    id: str
    description: str
    specs: Tuple[ParamSpec, ...]
    constraints: Tuple[Constraint, ...]
    build: Callable[[Params], TwistorSolution] = field(repr=False)

    def instantiate(self, given: Optional[Mapping[str, float]] = None) -> TwistorSolution:
        return self.build(resolve_params(self.specs, self.constraints, given))


def _clearance(name: str, func: Callable[[np.ndarray, Mapping[str, float]], np.ndarray]) -> SingularLocus:
    return SingularLocus(name, func)


SIGN = ParamSpec("sign", 1.0, description="sign of k relative to f")
SIGN_RULE = Constraint("sign in {-1, +1}", "f = +-k branches", lambda p: p["sign"] in (-1.0, 1.0))
M_RULE = Constraint("m > 0 and m != 1", "1 != m in R^+", lambda p: p["m"] > 0 and abs(p["m"] - 1.0) > 1e-12)
NONZERO_A = Constraint("a != 0", "a != 0", lambda p: p["a"] != 0)


def _unit_wave(sid: str, profile: str, epsilon: int, box: Box, amplitude: Callable[[Params], float],
               rate: Callable[[Params], float],
               singular: Tuple[SingularLocus, ...] = ()) -> Callable[[Params], TwistorSolution]:
    def build(p: Params) -> TwistorSolution:
        a, r = amplitude(p), rate(p)
        shape = WaveShape(profile, a, p["sign"] * a, r, r)
        return TwistorSolution(
            sid, 2, 2, epsilon, p, ALL_EQUATIONS, box, wave_jet(shape), singular, shape,
            note="unit-speed traveling wave f = +-k",
        )
    return build


def _speed_pair(sid: str, profile: str, epsilon: int, box: Box,
                singular: Tuple[SingularLocus, ...] = ()) -> Callable[[Params], TwistorSolution]:
    """f = c m W(c(m^2 x + y)/s), k = +-c W(...), s = sqrt(1+m^2)."""
    def build(p: Params) -> TwistorSolution:
        c, m = p["c"], p["m"]
        s = np.sqrt(1.0 + m * m)
        shape = WaveShape(profile, c * m, p["sign"] * c, c * m * m / s, c / s)
        return TwistorSolution(sid, 2, 2, epsilon, p, ALL_EQUATIONS, box, wave_jet(shape), singular, shape)
    return build


def _speed_argument(P: np.ndarray, p: Mapping[str, float]) -> np.ndarray:
    s = np.sqrt(1.0 + p["m"] ** 2)
    return p["c"] * (p["m"] ** 2 * P[:, 0] + P[:, 1]) / s


def _exp_pair(p: Params) -> TwistorSolution:
    a, b, m = p["a"], p["b"], p["m"]
    shape = WaveShape("exp", a * m, p["sign"] * a, b * m * m, b)
    return TwistorSolution("exp-pair", 2, 2, 0, p, ALL_EQUATIONS, ((-2.0, 2.0), (-2.0, 2.0)), wave_jet(shape),
                           wave=shape)


def _rational_pair(p: Params) -> TwistorSolution:
    m = p["m"]
    s = np.sqrt(1.0 + m * m)
    shape = WaveShape("inv", m * s, p["sign"] * s, m * m, 1.0)
    locus = _clearance("m^2 x + y != 0", lambda P, q: np.abs(q["m"] ** 2 * P[:, 0] + P[:, 1]))
    return TwistorSolution("rational-pair", 2, 2, -1, p, ALL_EQUATIONS, ((0.3, 2.0), (0.3, 2.0)),
                           wave_jet(shape), (locus,), shape)


def _arctan_jet(a: float, c: float, sign: float) -> JetFunction:
    """f = a x^{-1/2} e^{c theta}, k = +-a (-y)^{-1/2} e^{c theta}, theta = arctan sqrt(-y/x)."""
    def jet(P: np.ndarray) -> JetArrays:
        x, y = P[:, 0], P[:, 1]
        u = -y
        D = x + u
        sx, su = np.sqrt(x), np.sqrt(u)
        theta = np.arctan(su / sx)
        th_x = -0.5 * su / sx / D
        th_y = -0.5 * sx / su / D
        th_xx = 0.5 * su / sx * (1.0 / (2.0 * x * D) + 1.0 / D ** 2)
        th_xy = 0.5 / sx * (0.5 / su / D - su / D ** 2)
        th_yy = -0.5 * sx * (0.5 / (u * su) / D + 1.0 / su / D ** 2)

        def hess(xx, xy, yy):
            return np.stack([np.stack([xx, xy], axis=-1), np.stack([xy, yy], axis=-1)], axis=-2)

        phi = -0.5 * np.log(x) + c * theta
        dphi = np.stack([-0.5 / x + c * th_x, c * th_y], axis=-1)
        ddphi = hess(0.5 / x ** 2 + c * th_xx, c * th_xy, c * th_yy)

        psi = -0.5 * np.log(u) + c * theta
        dpsi = np.stack([c * th_x, -0.5 / y + c * th_y], axis=-1)
        ddpsi = hess(c * th_xx, c * th_xy, 0.5 / y ** 2 + c * th_yy)
        return _stack(_log_jet(a, phi, dphi, ddphi), _log_jet(sign * a, psi, dpsi, ddpsi))

    return jet


def _arctan_pair(p: Params) -> TwistorSolution:
    positive_x = _clearance("x > 0", lambda P, q: P[:, 0])
    negative_y = _clearance("y < 0", lambda P, q: -P[:, 1])
    return TwistorSolution(
        "arctan-pair", 2, 2, 0, p, ALL_EQUATIONS, ((0.1, 2.0), (-2.0, -0.1)),
        _arctan_jet(p["a"], p["c"], p["sign"]), (positive_x, negative_y),
        note="real branch of arctan sqrt(-y/x) on x > 0, y < 0",
    )


def _equal_pair(p: Params) -> TwistorSolution:
    """f_1 = f_2 = exp(0.5 sin x + 0.3 x y)."""
    def jet(P: np.ndarray) -> JetArrays:
        x, y = P[:, 0], P[:, 1]
        phi = 0.5 * np.sin(x) + 0.3 * x * y
        dphi = np.stack([0.5 * np.cos(x) + 0.3 * y, 0.3 * x], axis=-1)
        ddphi = np.zeros((P.shape[0], 2, 2))
        ddphi[:, 0, 0] = -0.5 * np.sin(x)
        ddphi[:, 0, 1] = ddphi[:, 1, 0] = 0.3
        single = _log_jet(1.0, phi, dphi, ddphi)
        return _stack(single, single)

    return TwistorSolution("equal-pair", 2, 2, 0, p, frozenset({HSTATIONARY}), ((-2.0, 2.0), (-2.0, 2.0)), jet,
                           note="equal twistor functions are H-stationary for any f")


def _warped_triple(p: Params) -> TwistorSolution:
    """f_1 = 1 + z^2, f_2 = 2 + sin z on (x, y, z)."""
    def jet(P: np.ndarray) -> JetArrays:
        z = P[:, 2]
        k = P.shape[0]
        vals = np.stack([1.0 + z * z, 2.0 + np.sin(z)], axis=1)
        grads = np.zeros((k, 2, 3))
        grads[:, 0, 2] = 2.0 * z
        grads[:, 1, 2] = np.cos(z)
        hess = np.zeros((k, 2, 3, 3))
        hess[:, 0, 2, 2] = 2.0
        hess[:, 1, 2, 2] = -np.sin(z)
        return vals, grads, hess

    return TwistorSolution("warped-triple", 2, 3, 0, p, frozenset({HSTATIONARY, TWISTED_CLOSED}),
                           ((-2.0, 2.0),) * 3, jet, note="warped product: twistor functions depend on z only")


SQRT2 = np.sqrt(2.0)

SOLUTIONS: Dict[str, SolutionFamily] = {}


def _register(family: SolutionFamily):
    SOLUTIONS[family.id] = family


_register(SolutionFamily(
    "sech-wave", "f = +-k = c1 sech(c1 (x+y)/sqrt2), epsilon = 1",
    (ParamSpec("c1", 1.0, 0.5, 1.5), SIGN), (positive("c1"), SIGN_RULE),
    _unit_wave("sech-wave", "sech", 1, ((-2.0, 2.0), (-2.0, 2.0)), lambda p: p["c1"], lambda p: p["c1"] / SQRT2),
))
_register(SolutionFamily(
    "exp-wave", "f = +-k = a e^{b(x+y)}, epsilon = 0 (also the diagonal exponential solution in C^2)",
    (ParamSpec("a", 1.0, 0.5, 1.5), ParamSpec("b", 0.5, -1.0, 1.0), SIGN), (NONZERO_A, SIGN_RULE),
    _unit_wave("exp-wave", "exp", 0, ((-2.0, 2.0), (-2.0, 2.0)), lambda p: p["a"], lambda p: p["b"]),
))
_register(SolutionFamily(
    "sec-wave", "f = +-k = c sec(c (x+y)/sqrt2), epsilon = -1",
    (ParamSpec("c", 1.0, 0.5, 1.2), SIGN), (positive("c"), SIGN_RULE),
    _unit_wave("sec-wave", "sec", -1, ((-1.0, 1.0), (-1.0, 1.0)), lambda p: p["c"], lambda p: p["c"] / SQRT2,
               (_clearance("cos(c(x+y)/sqrt2) != 0",
                           lambda P, q: np.abs(np.cos(q["c"] * (P[:, 0] + P[:, 1]) / SQRT2))),)),
))
_register(SolutionFamily(
    "csch-wave", "f = +-k = c csch(c (x+y)/sqrt2), epsilon = -1",
    (ParamSpec("c", 1.0, 0.5, 1.5), SIGN), (positive("c"), SIGN_RULE),
    _unit_wave("csch-wave", "csch", -1, ((0.2, 1.5), (0.2, 1.5)), lambda p: p["c"], lambda p: p["c"] / SQRT2,
               (_clearance("x + y != 0", lambda P, q: np.abs(P[:, 0] + P[:, 1])),)),
))
_register(SolutionFamily(
    "rational-wave", "f = +-k = sqrt2/(x+y), epsilon = -1",
    (SIGN,), (SIGN_RULE,),
    _unit_wave("rational-wave", "inv", -1, ((0.3, 2.0), (0.3, 2.0)), lambda p: SQRT2, lambda p: 1.0,
               (_clearance("x + y != 0", lambda P, q: np.abs(P[:, 0] + P[:, 1])),)),
))

_PAIR_SPECS = (ParamSpec("c", 1.0, 0.5, 1.5), ParamSpec("m", 2.0, 1.2, 3.0), SIGN)
_register(SolutionFamily(
    "sech-pair", "f = c m sech(c(m^2x+y)/s), k = +-c sech(...), epsilon = 1",
    _PAIR_SPECS, (positive("c"), M_RULE, SIGN_RULE),
    _speed_pair("sech-pair", "sech", 1, ((-2.0, 2.0), (-2.0, 2.0))),
))
_register(SolutionFamily(
    "sec-pair", "f = c m sec(c(m^2x+y)/s), k = +-c sec(...), epsilon = -1",
    _PAIR_SPECS, (positive("c"), M_RULE, SIGN_RULE),
    _speed_pair("sec-pair", "sec", -1, ((-0.5, 0.5), (-0.5, 0.5)),
                (_clearance("cos(c(m^2x+y)/s) != 0", lambda P, q: np.abs(np.cos(_speed_argument(P, q)))),)),
))
_register(SolutionFamily(
    "csch-pair", "f = c m csch(c(m^2x+y)/s), k = +-c csch(...), epsilon = -1",
    _PAIR_SPECS, (positive("c"), M_RULE, SIGN_RULE),
    _speed_pair("csch-pair", "csch", -1, ((0.2, 1.5), (0.2, 1.5)),
                (_clearance("m^2x + y != 0", lambda P, q: np.abs(_speed_argument(P, q))),)),
))
_register(SolutionFamily(
    "exp-pair", "f = a m e^{b(m^2x+y)}, k = +-a e^{b(m^2x+y)}, epsilon = 0",
    (ParamSpec("a", 1.0, 0.5, 1.5), ParamSpec("b", 0.5, -1.0, 1.0), ParamSpec("m", 2.0, 1.2, 3.0), SIGN),
    (NONZERO_A, M_RULE, SIGN_RULE), _exp_pair,
))
_register(SolutionFamily(
    "rational-pair", "f = m s/(m^2x+y), k = +-s/(m^2x+y), epsilon = -1",
    (ParamSpec("m", 2.0, 1.2, 3.0), SIGN), (M_RULE, SIGN_RULE), _rational_pair,
))
_register(SolutionFamily(
    "arctan-pair", "f = a x^{-1/2} e^{c arctan sqrt(-y/x)}, k = +-a (-y)^{-1/2} e^{...}, epsilon = 0",
    (ParamSpec("a", 1.0, 0.5, 1.5), ParamSpec("c", 1.0, -1.5, 1.5), SIGN), (NONZERO_A, SIGN_RULE), _arctan_pair,
))
_register(SolutionFamily("equal-pair", "f_1 = f_2 = exp(0.5 sin x + 0.3 x y)", (), (), _equal_pair))
_register(SolutionFamily("warped-triple", "f_1 = 1 + z^2, f_2 = 2 + sin z on (x, y, z)", (), (), _warped_triple))


def list_solutions() -> List[dict]:
    return [
        {
            "id": fam.id,
            "description": fam.description,
            "params": [spec.to_dict() for spec in fam.specs],
            "constraints": [c.predicate for c in fam.constraints],
        }
        for fam in sorted(SOLUTIONS.values(), key=lambda f: f.id)
    ]


def solution_family(sid: str) -> SolutionFamily:
    try:
        return SOLUTIONS[sid]
    except KeyError:
        raise FamilyNotFoundError(sid)


def build_solution(sid: str, params: Optional[Mapping[str, float]] = None) -> TwistorSolution:
    """Instantiate a registered solution with validated parameters."""
    return solution_family(sid).instantiate(params)


# =============================================================================
# RESIDUALS
# =============================================================================

PointsLike = Union[np.ndarray, Sequence[float], Sequence[Sequence[float]]]


def _points(sol: TwistorSolution, p: PointsLike) -> Tuple[np.ndarray, bool]:
    P = np.asarray(p, dtype=float)
    single = P.ndim == 1
    P = np.atleast_2d(P)
    if P.shape[1] != sol.n:
        raise DimensionError(f"solution {sol.id} has {sol.n} coordinates, got points of width {P.shape[1]}")
    return P, single


def _out(values: np.ndarray, single: bool):
    return float(values[0]) if single else values


def _require_pair(sol: TwistorSolution):
    if sol.ell != 2:
        raise DimensionError(f"equation needs two twistor functions, solution {sol.id} has {sol.ell}")


def _square_partials(vals: np.ndarray, grads: np.ndarray) -> np.ndarray:
    """D[:, i, j] = d_j (f_i^2) over the twisted coordinates j < l."""
    ell = vals.shape[1]
    return 2.0 * vals[:, :, None] * grads[:, :, :ell]


def twisted_closed_residual(sol: TwistorSolution, p: PointsLike):
    """max_{i<j} |d_j(f_i^2) - d_i(f_j^2)|; identically 0 when l = 1."""
    P, single = _points(sol, p)
    vals, grads, _ = sol.jet(P)
    D = _square_partials(vals, grads)
    out = np.zeros(P.shape[0])
    for i in range(sol.ell):
        for j in range(i + 1, sol.ell):
            out = np.maximum(out, np.abs(D[:, i, j] - D[:, j, i]))
    return _out(out, single)


def hstationary_residual(sol: TwistorSolution, p: PointsLike):
    """
    |sum_j f_j^{-4} d_j f_j^2 - sum_{i != j} (f_i f_j)^{-2} d_j f_i^2|

    For two functions this is 2/|f k| times the divergence form
    (k/f)_x + (f/k)_y.
    """
    P, single = _points(sol, p)
    vals, grads, _ = sol.jet(P)
    D = _square_partials(vals, grads)
    q = vals * vals
    own = np.zeros(P.shape[0])
    cross = np.zeros(P.shape[0])
    for j in range(sol.ell):
        own += D[:, j, j] / (q[:, j] * q[:, j])
        for i in range(sol.ell):
            if i != j:
                cross += D[:, i, j] / (q[:, i] * q[:, j])
    return _out(np.abs(own - cross), single)


def _pair_terms(sol: TwistorSolution, P: np.ndarray):
    vals, grads, hess = sol.jet(P)
    f, k = vals[:, 0], vals[:, 1]
    fx, fy = grads[:, 0, 0], grads[:, 0, 1]
    kx, ky = grads[:, 1, 0], grads[:, 1, 1]
    fyy, kxx = hess[:, 0, 1, 1], hess[:, 1, 0, 0]
    return f, k, fx, fy, kx, ky, fyy, kxx


def divergence_form_residual(sol: TwistorSolution, p: PointsLike):
    """|(k/f)_x + (f/k)_y|"""
    _require_pair(sol)
    P, single = _points(sol, p)
    f, k, fx, fy, kx, ky, _, _ = _pair_terms(sol, P)
    out = (kx * f - k * fx) / f ** 2 + (fy * k - f * ky) / k ** 2
    return _out(np.abs(out), single)


def ratio_form_residual(sol: TwistorSolution, p: PointsLike):
    """|f_y/k - k_x/f|, equivalent to f f_y = k k_x."""
    _require_pair(sol)
    P, single = _points(sol, p)
    f, k, _, fy, kx, _, _, _ = _pair_terms(sol, P)
    return _out(np.abs(fy / k - kx / f), single)


def curvature_residual(sol: TwistorSolution, p: PointsLike):
    """|(f_y/k)_y + (k_x/f)_x + epsilon f k|"""
    _require_pair(sol)
    P, single = _points(sol, p)
    f, k, fx, fy, kx, ky, fyy, kxx = _pair_terms(sol, P)
    out = fyy / k - fy * ky / k ** 2 + kxx / f - kx * fx / f ** 2 + sol.epsilon * f * k
    return _out(np.abs(out), single)


RESIDUALS = {
    HSTATIONARY: divergence_form_residual,
    TWISTED_CLOSED: ratio_form_residual,
    CURVATURE: curvature_residual,
}


@dataclass(frozen=True)
class ResidualReport:
    """Per-equation max and rms residual over a point set"""
    solution: str
    params: Params
    equations: Dict[str, Tuple[float, float]]
    declared: FrozenSet[str]
    count: int
    grid: Optional[dict] = None

    def max_declared(self) -> float:
        return max((self.equations[name][0] for name in self.declared if name in self.equations), default=0.0)

    def to_dict(self) -> dict:
        return {
            "solution": self.solution,
            "params": dict(self.params),
            "equations": {name: {"max": mx, "rms": rms} for name, (mx, rms) in sorted(self.equations.items())},
            "declared": sorted(self.declared),
            "count": self.count,
            "grid": self.grid,
        }


def _max_rms(values: np.ndarray) -> Tuple[float, float]:
    values = np.asarray(values, dtype=float)
    return float(np.max(values)), float(np.sqrt(np.mean(values * values)))


def full_system_residual(sol: TwistorSolution, grid: Union[GridSpec, PointsLike, None] = None) -> ResidualReport:
    """
    Divergence-form, ratio-form and curvature residuals over a grid.

    For epsilon = 0 the three equations are the flat system whose
    solutions give the type II surfaces of C^2.
    """
    _require_pair(sol)
    grid_meta = None
    if grid is None:
        grid = GridSpec(count=DEFAULT_GRID, seed=DEFAULT_SEED)
    if isinstance(grid, GridSpec):
        grid_meta = grid.to_dict()
        P = sol.sample(grid)
    else:
        P, _ = _points(sol, grid)
    equations = {name: _max_rms(func(sol, P)) for name, func in RESIDUALS.items()}
    logger.debug("residuals of %s over %d points: %s", sol.id, P.shape[0], equations)
    return ResidualReport(sol.id, dict(sol.params), equations, sol.declared, P.shape[0], grid_meta)


def general_residual_report(sol: TwistorSolution, grid: Union[GridSpec, PointsLike, None] = None) -> ResidualReport:
    """The l-function equations (twisted closed, H-stationary) for any l."""
    grid_meta = None
    if grid is None:
        grid = GridSpec(count=DEFAULT_GRID, seed=DEFAULT_SEED)
    if isinstance(grid, GridSpec):
        grid_meta = grid.to_dict()
        P = sol.sample(grid)
    else:
        P, _ = _points(sol, grid)
    equations = {
        HSTATIONARY: _max_rms(hstationary_residual(sol, P)),
        TWISTED_CLOSED: _max_rms(twisted_closed_residual(sol, P)),
    }
    return ResidualReport(sol.id, dict(sol.params), equations, sol.declared & {HSTATIONARY, TWISTED_CLOSED},
                          P.shape[0], grid_meta)


def residual_report(sol: TwistorSolution, grid: Union[GridSpec, PointsLike, None] = None) -> ResidualReport:
    if sol.ell == 2 and sol.declared >= {HSTATIONARY, TWISTED_CLOSED}:
        return full_system_residual(sol, grid)
    return general_residual_report(sol, grid)


# =============================================================================
# SCALING TRANSFORMS
# =============================================================================

class ScaleMode(Enum):
    """stretch: F = c m f(m^2 x, y), K = c k(m^2 x, y);
    traveling: a unit-speed wave becomes a wave in m^2 x + y"""
    STRETCH = "stretch"
    TRAVELING = "traveling"


def _stretch_jet(jet: JetFunction, factors: np.ndarray, scales: np.ndarray) -> JetFunction:
    outer = np.outer(factors, factors)

    def scaled(P: np.ndarray) -> JetArrays:
        vals, grads, hess = jet(P * factors)
        return (
            vals * scales,
            grads * scales[None, :, None] * factors,
            hess * scales[None, :, None, None] * outer,
        )

    return scaled


def _shrink_x(box: Box, factor: float) -> Box:
    return ((box[0][0] / factor, box[0][1] / factor),) + tuple(box[1:])


def scale_transform(sol: TwistorSolution, m: float, c: float = 1.0,
                    mode: Union[ScaleMode, str] = ScaleMode.STRETCH) -> TwistorSolution:
    """
    Rescale a two-function solution.

    STRETCH keeps the divergence-form and ratio-form equations; TRAVELING
    needs a unit-speed wave f = +-k = W(x+y) and keeps the whole system.
    Both shrink the x interval by m^2. The constant c only applies to
    STRETCH.

    Raises:
        AdmissibilityError: m <= 0, m == 1, c == 0, c != 1 for TRAVELING or a
            non-wave input
    """
    mode = ScaleMode(mode)
    if not m > 0 or abs(m - 1.0) < 1e-12:
        raise AdmissibilityError(f"m > 0 and m != 1, got m={m}", "1 != m in R^+")
    _require_pair(sol)
    params = dict(sol.params)
    params.update({"scale_m": float(m)})

    if mode is ScaleMode.STRETCH:
        if c == 0:
            raise AdmissibilityError("c != 0", "nonzero rescaling constant")
        params["scale_c"] = float(c)
        factors = np.ones(sol.n)
        factors[0] = m * m
        scales = np.array([c * m, c])
        inner_singular = sol.singular
        singular = tuple(
            SingularLocus(locus.name + " (stretched)",
                          lambda P, q, _l=locus, _f=factors: _l.clearance(P * _f, sol.params))
            for locus in inner_singular
        )
        wave = None
        if sol.wave is not None:
            w = sol.wave
            wave = WaveShape(w.profile, c * m * w.A, c * w.B, w.alpha * m * m, w.beta)
        return replace(
            sol,
            id=f"{sol.id}/stretch",
            params=params,
            declared=sol.declared & {HSTATIONARY, TWISTED_CLOSED},
            box=_shrink_x(sol.box, m * m),
            jet=_stretch_jet(sol.jet, factors, scales),
            singular=singular,
            wave=wave,
        )

    if c != 1.0:
        raise AdmissibilityError(f"traveling transform takes no rescaling constant, got c={c}", "c = 1")
    w = sol.wave
    if w is None or not w.unit_speed:
        raise AdmissibilityError(f"{sol.id} is not a unit-speed wave f = +-k = W(x+y)", "traveling-wave input")
    s = np.sqrt(1.0 + m * m)
    shape = WaveShape(w.profile, m * s * w.A / SQRT2, s * w.B / SQRT2, w.alpha * m * m, w.alpha)

    def speed_clearance(P, q, _sol=sol, _m=m):
        Q = np.stack([(_m * _m * P[:, 0] + P[:, 1]) / 2.0] * 2, axis=1)
        return np.min([locus.clearance(Q, _sol.params) for locus in _sol.singular], axis=0) \
            if _sol.singular else np.full(P.shape[0], np.inf)

    singular = (SingularLocus("wave argument regular", speed_clearance),) if sol.singular else ()
    return replace(
        sol,
        id=f"{sol.id}/traveling",
        params=params,
        box=_shrink_x(sol.box, m * m),
        jet=wave_jet(shape),
        singular=singular,
        wave=shape,
    )


# =============================================================================
# LIFT SYSTEMS AND CLASSIFICATION
# =============================================================================

def sech_lift_system_residual(jet: Jet2, m: float) -> float:
    """
    Max norm of the linear system satisfied by the horizontal lift of the
    CP^2 sech surface, w = (m^2 x + y)/s:

        L_xx = i L_x - m^2 (L_x - L_y) tanh w / s - m^2 sech^2 w L
        L_xy = -(L_x + m^2 L_y) tanh w / s
        L_yy = i L_y + (L_x - L_y) tanh w / s - sech^2 w L
    """
    if jet.n != 2:
        raise DimensionError(f"lift system needs a surface jet, got n={jet.n}")
    s = np.sqrt(1.0 + m * m)
    w = (m * m * jet.point[0] + jet.point[1]) / s
    T, S2 = np.tanh(w), 1.0 / np.cosh(w) ** 2
    L, Lx, Ly = jet.value, jet.grad[0], jet.grad[1]
    e1 = jet.hess[0, 0] - (1j * Lx - m * m * (Lx - Ly) * T / s - m * m * S2 * L)
    e2 = jet.hess[0, 1] + (Lx + m * m * Ly) * T / s
    e3 = jet.hess[1, 1] - (1j * Ly + (Lx - Ly) * T / s - S2 * L)
    return float(max(np.max(np.abs(e1)), np.max(np.abs(e2)), np.max(np.abs(e3))))


def flat_lift_system_residual(jet: Jet2, b: float, m: float) -> float:
    """
    Max norm of the flat analogue:

        L_xx = (i + b m^2) L_x - b m^2 L_y
        L_xy = b L_x + b m^2 L_y
        L_yy = -b L_x + (i + b) L_y
    """
    if jet.n != 2:
        raise DimensionError(f"lift system needs a surface jet, got n={jet.n}")
    Lx, Ly = jet.grad[0], jet.grad[1]
    bm2 = b * m * m
    e1 = jet.hess[0, 0] - ((1j + bm2) * Lx - bm2 * Ly)
    e2 = jet.hess[0, 1] - (b * Lx + bm2 * Ly)
    e3 = jet.hess[1, 1] - (-b * Lx + (1j + b) * Ly)
    return float(max(np.max(np.abs(e1)), np.max(np.abs(e2)), np.max(np.abs(e3))))


def type1_classifier(sol: TwistorSolution, points: Union[GridSpec, PointsLike, None] = None,
                     tol: float = 1e-9) -> bool:
    """True when f^2 = k^2 on the sample (type I), False otherwise (type II)."""
    _require_pair(sol)
    if points is None:
        points = GridSpec(count=DEFAULT_GRID, mode=SamplingMode.RANDOM, seed=DEFAULT_SEED)
    P = sol.sample(points) if isinstance(points, GridSpec) else _points(sol, points)[0]
    vals = sol.values(P)
    return bool(np.max(np.abs(vals[:, 0] ** 2 - vals[:, 1] ** 2)) < tol)
