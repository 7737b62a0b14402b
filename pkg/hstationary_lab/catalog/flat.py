#!/usr/bin/env python3
"""
FLAT AMBIENT FAMILIES

H-stationary Lagrangian immersions into complex Euclidean space: the two
warped flat families in any dimension up to four, and in C^2 the type I torus
and spiral, the exponential type II family, the Bessel-function surface and a
non-H-stationary control.
"""

import numpy as np

from ..ambient import AmbientModel
from ..params import Constraint, ParamSpec, positive, whole
from ..specfun import bessel_j_array, fresnel_bessel_series
from .base import (
    EXPECTED_FAIL_NOTE, ImmersionFamily, LiftSystem, Pattern, Shape, Tier, TwistorLink, axis, clearance, cos_of,
    default_shape, exp_of, linear, monomial, plus, register, scaled, sin_of, times,
)

C2 = AmbientModel.flat(2)
M_RULE = Constraint("m > 0 and m != 1", "1 != m in R^+", lambda p: p["m"] > 0 and abs(p["m"] - 1.0) > 1e-12)


def _diag_metric(f):
    """Metric function diag(f(P, params)) from per-axis squared lengths."""
    def metric(P, p):
        diag = f(P, p)
        out = np.zeros((P.shape[0], diag.shape[1], diag.shape[1]))
        idx = np.arange(diag.shape[1])
        out[:, idx, idx] = diag
        return out
    return metric


# =============================================================================
# WARPED FLAT FAMILIES
# =============================================================================

MAX_DIM = 4
DIM_SPECS = (
    ParamSpec("n", 2, description="intrinsic dimension"),
    ParamSpec("ell", 1, description="number of circle factors"),
)


def _amplitudes(prefix: str, default: float, low: float, high: float):
    return tuple(ParamSpec(f"{prefix}{j}", default, low, high) for j in range(1, MAX_DIM + 1))


def _positive_range(prefix: str, first, last) -> Constraint:
    """prefix_j > 0 for first(p) < j <= last(p)."""
    text = f"{prefix}_j > 0 on the active factors"
    return Constraint(text, text, lambda p: all(p[f"{prefix}{j}"] > 0 for j in range(first(p) + 1, last(p) + 1)))


def _dims(p):
    return int(p["n"]), int(p["ell"])


def _circle_line(p):
    n, ell = _dims(p)
    circles = [exp_of(axis(n, j, 1j), p[f"a{j + 1}"]) for j in range(ell)]
    return circles + [linear(n, j) for j in range(ell, n)]


def _circle_line_metric(P, p):
    n, ell = _dims(p)
    diag = np.ones((P.shape[0], n))
    for j in range(ell):
        diag[:, j] = p[f"a{j + 1}"] ** 2
    return diag


def _circle_line_shape(p) -> Shape:
    n, ell = _dims(p)
    return Shape(
        ambient=AmbientModel.flat(n), ell=ell, box=((-2.0, 2.0),) * n,
        nullity=(n - ell, n - ell), pattern=Pattern(tuple(range(ell))) if ell else None,
        unused=tuple(f"a{j}" for j in range(ell + 1, MAX_DIM + 1)),
    )


CIRCLE_LINE_SPECS = DIM_SPECS + _amplitudes("a", 1.0, 0.5, 1.5)

register(ImmersionFamily(
    id="cn-circle-line",
    source="warped flat family (a_1 e^{i x_1}, ..., a_l e^{i x_l}, x_{l+1}, ..., x_n) in C^n",
    specs=CIRCLE_LINE_SPECS,
    constraints=(
        whole("n", 1, MAX_DIM),
        Constraint("0 <= l <= n", "0 <= l <= n", lambda p: float(p["ell"]).is_integer() and 0 <= p["ell"] <= p["n"]),
        _positive_range("a", lambda p: 0, lambda p: int(p["ell"])),
    ),
    terms=_circle_line,
    advertised_metric=_diag_metric(_circle_line_metric),
    manifest_key="cn-warped:a",
    **default_shape(_circle_line_shape, CIRCLE_LINE_SPECS),
))


def _twisted_circles(phase_root):
    """
    k twisted blocks (b_j-dependent circles scaled by x_{l+j}), then circles
    a_{k+1}, ..., a_l, then lines, then the second entries of the blocks.
    """
    def terms(p):
        n, ell = _dims(p)
        k = int(p["k"])
        firsts, seconds = [], []
        for j in range(k):
            b = p[f"b{j + 1}"]
            beta = np.sqrt(1.0 + 4.0 * b * b)
            root = phase_root(b)
            upper = np.sqrt(beta + 1.0) / (np.sqrt(2.0) * np.sqrt(beta))
            lower = np.sqrt(beta - 1.0) / (np.sqrt(2.0) * np.sqrt(beta))
            weight = linear(n, ell + j)
            firsts.append(times(exp_of(axis(n, j, 0.5j * (1.0 - root)), upper), weight))
            seconds.append(times(exp_of(axis(n, j, 0.5j * (1.0 + root)), lower), weight))
        circles = [exp_of(axis(n, j, 1j), p[f"a{j + 1}"]) for j in range(k, ell)]
        lines = [linear(n, j) for j in range(ell + k, n)]
        return firsts + circles + lines + seconds
    return terms


def _twisted_circles_metric(P, p):
    n, ell = _dims(p)
    k = int(p["k"])
    diag = np.ones((P.shape[0], n))
    for j in range(k):
        diag[:, j] = p[f"b{j + 1}"] ** 2 * P[:, ell + j] ** 2
    for j in range(k, ell):
        diag[:, j] = p[f"a{j + 1}"] ** 2
    return diag


def _twisted_circles_shape(p) -> Shape:
    n, ell = _dims(p)
    k = int(p["k"])
    box = [(-2.0, 2.0)] * n
    box[ell:ell + k] = [(0.3, 2.0)] * k
    unused = [f"a{j}" for j in range(1, MAX_DIM + 1) if not k < j <= ell]
    unused += [f"b{j}" for j in range(k + 1, MAX_DIM + 1)]
    return Shape(
        ambient=AmbientModel.flat(n), ell=ell, box=tuple(box),
        nullity=(n - ell, n - ell), pattern=Pattern(tuple(range(ell))), unused=tuple(unused),
    )


TWISTED_RULES = (
    whole("n", 2, MAX_DIM),
    Constraint("1 <= k <= l and l + k <= n", "1 <= k <= l, l + k <= n",
               lambda p: all(float(p[name]).is_integer() for name in ("ell", "k"))
               and 1 <= p["k"] <= p["ell"] and p["ell"] + p["k"] <= p["n"]),
    _positive_range("b", lambda p: 0, lambda p: int(p["k"])),
    _positive_range("a", lambda p: int(p["k"]), lambda p: int(p["ell"])),
)
TWISTED_SPECS = DIM_SPECS + (ParamSpec("k", 1, description="number of twisted blocks"),)
TWISTED_CANONICAL_SPECS = TWISTED_SPECS + _amplitudes("b", 0.5, 0.2, 1.5) + _amplitudes("a", 1.0, 0.5, 1.5)
TWISTED_PRINTED_SPECS = TWISTED_SPECS + _amplitudes("b", 0.3, 0.1, 0.45) + _amplitudes("a", 1.0, 0.5, 1.5)

register(ImmersionFamily(
    id="cn-twisted-circles",
    source="warped flat family of circles twisted along x_{l+j}, phases (1 -+ sqrt(1+4b_j^2))/2",
    specs=TWISTED_CANONICAL_SPECS,
    constraints=TWISTED_RULES,
    terms=_twisted_circles(lambda b: np.sqrt(1.0 + 4.0 * b * b)),
    advertised_metric=_diag_metric(_twisted_circles_metric),
    manifest_key="cn-warped:b",
    **default_shape(_twisted_circles_shape, TWISTED_CANONICAL_SPECS),
))

register(ImmersionFamily(
    id="cn-twisted-circles-printed",
    source="warped flat family of twisted circles, printed phases (1 -+ sqrt(1-4b_j^2))/2",
    specs=TWISTED_PRINTED_SPECS,
    constraints=TWISTED_RULES + (
        Constraint("4b_j^2 < 1", "real sqrt(1-4b_j^2)",
                   lambda p: all(4 * p[f"b{j}"] ** 2 < 1 for j in range(1, int(p["k"]) + 1))),
    ),
    terms=_twisted_circles(lambda b: np.sqrt(1.0 - 4.0 * b * b)),
    advertised_metric=_diag_metric(_twisted_circles_metric),
    tier=Tier.B, variant_of="cn-twisted-circles", ledgered=("isotropy",),
    note="printed phases pair sqrt(1-4b^2) with sqrt(1+4b^2) amplitudes; the Lagrangian check fails",
    **default_shape(_twisted_circles_shape, TWISTED_PRINTED_SPECS),
))


# =============================================================================
# TYPE I SURFACES
# =============================================================================

register(ImmersionFamily(
    id="c2-torus",
    source="type I surface a(e^{ix}, e^{iy}) in C^2",
    ambient=C2, ell=2,
    specs=(ParamSpec("a", 1.0, 0.5, 1.5),), constraints=(positive("a"),),
    box=((-2.0, 2.0), (-2.0, 2.0)),
    terms=lambda p: [exp_of((1j, 0.0), p["a"]), exp_of((0.0, 1j), p["a"])],
    twistor_link=TwistorLink("exp-wave", lambda p: {"a": p["a"], "b": 0.0}),
    nullity=(0, 0), pattern=Pattern((0, 1)),
    manifest_key="c2-type1:torus", surface_type="I",
))


def _spiral(exponent):
    def terms(p):
        a, b = p["a"], p["b"]
        beta = np.sqrt(1.0 + 4.0 * b * b)
        lam = exponent(b, beta)
        grow = exp_of((lam, lam), np.sqrt(2.0) * a / beta)
        t = (beta / 2.0, -beta / 2.0)
        return [times(grow, cos_of(t)), times(grow, sin_of(t))]
    return terms


register(ImmersionFamily(
    id="c2-spiral",
    source="type I spiral surface (sqrt2 a/beta) e^{(b+i/2)(x+y)} (cos, sin)(beta(x-y)/2) in C^2",
    ambient=C2, ell=2,
    specs=(ParamSpec("a", 1.0, 0.5, 1.5), ParamSpec("b", 0.3, -0.5, 0.5)), constraints=(positive("a"),),
    box=((-1.5, 1.5), (-1.5, 1.5)),
    terms=_spiral(lambda b, beta: b + 0.5j),
    twistor_link=TwistorLink("exp-wave", lambda p: {"a": p["a"], "b": p["b"]}),
    nullity=(0, 0), pattern=Pattern((0, 1)),
    manifest_key="c2-type1:spiral", surface_type="I",
))

register(ImmersionFamily(
    id="c2-spiral-printed",
    source="type I spiral surface with the printed real exponent beta(x+y)/2",
    ambient=C2, ell=2,
    specs=(ParamSpec("a", 1.0, 0.5, 1.5), ParamSpec("b", 0.3, -0.5, 0.5)), constraints=(positive("a"),),
    box=((-1.5, 1.5), (-1.5, 1.5)),
    terms=_spiral(lambda b, beta: beta / 2.0),
    twistor_link=TwistorLink("exp-wave", lambda p: {"a": p["a"], "b": p["b"]}),
    pattern=Pattern((0, 1)),
    tier=Tier.B, variant_of="c2-spiral", surface_type="I", ledgered=("metric_twistor", "pattern"),
    note="printed exponent is real, so the image is an open set of R^2; the metric and pattern checks fail",
))


# =============================================================================
# TYPE II SURFACES
# =============================================================================

def _exp_pair_surface(p):
    """e^{i(x+y)/2 + b(m^2x+y)}/s (2m sin(gt/2)/g, s^2 cos(gt/2)/N - i(1-m^2) sin(gt/2)/(gN))."""
    b, m = p["b"], p["m"]
    s = np.sqrt(1.0 + m * m)
    gamma = np.sqrt(1.0 + 4.0 * b * b * m * m)
    norm = np.sqrt(1.0 + b * b * s ** 4)
    grow = exp_of((0.5j + b * m * m, 0.5j + b), 1.0 / s)
    half = (gamma / 2.0, -gamma / 2.0)
    first = scaled(2.0 * m / gamma, times(grow, sin_of(half)))
    second = plus(
        scaled(s * s / norm, times(grow, cos_of(half))),
        scaled(-1j * (1.0 - m * m) / (gamma * norm), times(grow, sin_of(half))),
    )
    return [first, second]


register(ImmersionFamily(
    id="c2-exp-pair",
    source="type II surface from f = m e^{b(m^2x+y)}, k = e^{b(m^2x+y)} in C^2 (b = 0 gives the sin/cot display)",
    ambient=C2, ell=2,
    specs=(ParamSpec("b", 0.2, -0.3, 0.3), ParamSpec("m", 2.0, 1.2, 3.0)), constraints=(M_RULE,),
    box=((-1.0, 1.0), (-1.0, 1.0)),
    terms=_exp_pair_surface,
    twistor_link=TwistorLink("exp-pair", lambda p: {"a": 1.0, "b": p["b"], "m": p["m"]}),
    lift_system=LiftSystem("flat", lambda p: {"b": p["b"], "m": p["m"]}),
    manifest_key="c2-type2:exp", surface_type="II",
))


def _bessel_surface(P, p):
    """
    Bessel-function surface in the polar chart x = 2r^2 cos^2 theta,
    y = -2r^2 sin^2 theta with T^{+-} = e^{(c +- i) theta}.
    """
    a, c = p["a"], p["c"]
    x, y = P[:, 0], P[:, 1]
    R = 0.5 * (x - y)
    r = np.sqrt(R)
    theta = np.arctan(np.sqrt(-y / x))
    nu1, nu2 = -(1.0 + 1j * c) / 2.0, (1.0 - 1j * c) / 2.0
    nu3, nu4 = (1.0 + 1j * c) / 2.0, (1j * c - 1.0) / 2.0
    t_plus = np.exp((c + 1j) * theta)
    t_minus = np.exp((c - 1j) * theta)

    def J(nu):
        return bessel_j_array(nu, R)[0]

    def I(nu):
        return fresnel_bessel_series(nu, r)

    first = 1j * J(nu1) * t_plus + J(nu2) * t_minus + (I(nu1) + 1j * I(nu2)) / R
    second = 1j * R * J(nu3) * t_plus - R * J(nu4) * t_minus + (I(nu3) - 1j * I(nu4)) / R
    prefactor = np.sqrt(2.0 * np.pi) * a * R / np.sqrt(np.cosh(c * np.pi / 2.0))
    return prefactor[:, None] * np.stack([first, second], axis=1)


register(ImmersionFamily(
    id="c2-bessel",
    source=("type II surface from f = a x^{-1/2} e^{c arctan sqrt(-y/x)} "
            "built from J_nu(r^2) and its e^{ir^2} integrals"),
    ambient=C2, ell=2,
    specs=(ParamSpec("a", 1.0, 0.5, 1.5), ParamSpec("c", 1.0, 0.5, 1.5)),
    constraints=(positive("a"), Constraint("c != 0", "c != 0", lambda p: p["c"] != 0)),
    box=((0.3, 2.0), (-2.0, -0.3)),
    evaluator=_bessel_surface,
    singular=(clearance("x > 0", lambda P, q: P[:, 0]), clearance("y < 0", lambda P, q: -P[:, 1])),
    twistor_link=TwistorLink("arctan-pair", lambda p: {"a": p["a"], "c": p["c"]}),
    tier=Tier.B, manifest_key="c2-type2:bessel", surface_type="II",
    ledgered=("isotropy", "metric_twistor", "curvature", "div_jh", "codazzi"),
    note=("T_c^+- is not defined in the source; e^{(c +- i) theta} is a placeholder reading "
          "that is not expected to reproduce the surface"),
))


# =============================================================================
# NEGATIVE CONTROL
# =============================================================================

register(ImmersionFamily(
    id="c2-control",
    source="flat Lagrangian graph (x + i x^2, y), not H-stationary",
    ambient=C2, ell=0,
    specs=(), constraints=(),
    box=((-1.0, 1.0), (-1.0, 1.0)),
    terms=lambda p: [plus(monomial((1, 0)), monomial((2, 0), 1j)), monomial((0, 1))],
    nullity=(1, 1),
    tier=Tier.B, expected_fail=("div_jh",),
    note=f"{EXPECTED_FAIL_NOTE}: div JH = 12x/(1+4x^2)^3 is nonzero off x = 0",
))
