#!/usr/bin/env python3
"""
PROJECTIVE AMBIENT FAMILIES

Horizontal lifts to S^{2n+1}(1) of H-stationary Lagrangian submanifolds of
CP^n(4): the type I and sech type II surfaces of CP^2, the warped families
of constant curvature one in dimensions up to five, and the CP^3 families with positive relative
nullity (including the composition with an inner type II surface).
"""

import numpy as np

from ..ambient import AmbientModel, ModelKind
from ..params import Constraint, ParamSpec, positive, whole
from .base import (
    ImmersionFamily, LiftSystem, Pattern, Shape, Tier, TwistorLink, axis, cos_of, default_shape, exp_of, plus,
    register, round_metric, scaled, sin_of, sphere_weight_values, sphere_weights, times, unit_block,
)

CP2 = AmbientModel.spherical(2)
CP3 = AmbientModel.spherical(3)
SQRT2 = np.sqrt(2.0)
M_RULE = Constraint("m > 0 and m != 1", "1 != m in R^+", lambda p: p["m"] > 0 and abs(p["m"] - 1.0) > 1e-12)


# =============================================================================
# CP^2 SURFACES
# =============================================================================

def _cp2_type1(P, p):
    b = p["b"]
    alpha = np.sqrt(4.0 + b * b) / 2.0
    s = P[:, 0] + P[:, 1]
    t = P[:, 0] - P[:, 1]
    tail = np.exp(0.5j * b * s) / np.cosh(s)
    return np.stack([0.5j * b + np.tanh(s), tail * np.cos(alpha * t), tail * np.sin(alpha * t)], axis=1) / alpha


register(ImmersionFamily(
    id="cp2-type1",
    source="type I surface (ib/2 + tanh s, e^{ibs/2} sech s (cos, sin)(alpha t))/alpha, s = x+y, t = x-y",
    ambient=CP2, ell=2,
    specs=(ParamSpec("b", 1.0, 0.5, 2.0),), constraints=(positive("b"),),
    box=((-1.5, 1.5), (-1.5, 1.5)),
    evaluator=_cp2_type1,
    twistor_link=TwistorLink("sech-wave", lambda p: {"c1": SQRT2}),
    nullity=(0, 0), pattern=Pattern((0, 1), lambda p: p["b"]),
    manifest_key="cp2-type1", surface_type="I",
))


def _cp2_sech_pair(P, p):
    m = p["m"]
    s = np.sqrt(1.0 + m * m)
    root5 = np.sqrt(1.0 + 5.0 * m * m)
    w = (m * m * P[:, 0] + P[:, 1]) / s
    v = root5 / (2.0 * s) * (P[:, 0] - P[:, 1])
    phase = np.exp(0.5j * (P[:, 0] + P[:, 1]))
    first = 2.0 * m * np.sqrt(2.0 + m * m) / root5 * phase * np.sin(v)
    second = phase * (s * np.cos(v) - 1j * (1.0 - m * m) * np.sin(v) / root5)
    third = np.cosh(w) - 1j * s * np.sinh(w)
    return np.stack([first, second, third], axis=1) / (np.cosh(w) * np.sqrt(2.0 + m * m))[:, None]


register(ImmersionFamily(
    id="cp2-sech-pair",
    source="type II surface over g = sech^2((m^2x+y)/s)(m^2 dx^2 + dy^2), s = sqrt(1+m^2)",
    ambient=CP2, ell=2,
    specs=(ParamSpec("m", 2.0, 1.2, 3.0),), constraints=(M_RULE,),
    box=((-2.0, 2.0), (-2.0, 2.0)),
    evaluator=_cp2_sech_pair,
    twistor_link=TwistorLink("sech-pair", lambda p: {"c": 1.0, "m": p["m"]}),
    lift_system=LiftSystem("sech", lambda p: {"m": p["m"]}),
    manifest_key="cp2-type2:sech", surface_type="II",
))


# =============================================================================
# WARPED FAMILIES OF CONSTANT CURVATURE ONE
# =============================================================================

MAX_DIM = 4
MAX_ODD_BLOCKS = 3


def _block_metric(P, p, ell: int, angles, n: int):
    """Round metric in the angles plus a_j^2 w_j^2 dx_j^2 along each block."""
    g = round_metric(P, angles, n)
    w = sphere_weight_values(P, angles)
    for j in range(ell):
        g[:, j, j] = p[f"a{j + 1}"] ** 2 * w[:, j] ** 2
    return g


def _block_shape(n: int, ell: int, unused) -> Shape:
    return Shape(
        ambient=AmbientModel.spherical(n), ell=ell,
        box=((-2.0, 2.0),) * ell + ((0.3, 1.3),) * (n - ell),
        nullity=(n - ell, n - ell), pattern=Pattern(tuple(range(ell))), unused=tuple(unused),
    )


def _cpn_warped_a(p):
    n, ell = int(p["n"]), int(p["ell"])
    weights = sphere_weights(n, tuple(range(ell, n)), n - ell + 1)
    blocks = [unit_block(n, j, p[f"a{j + 1}"]) for j in range(ell)]
    return ([times(first, weights[j]) for j, (first, _) in enumerate(blocks)]
            + [times(second, weights[j]) for j, (_, second) in enumerate(blocks)]
            + weights[ell:])


def _cpn_warped_a_metric(P, p):
    n, ell = int(p["n"]), int(p["ell"])
    return _block_metric(P, p, ell, tuple(range(ell, n)), n)


def _cpn_warped_a_shape(p) -> Shape:
    n, ell = int(p["n"]), int(p["ell"])
    return _block_shape(n, ell, (f"a{j}" for j in range(ell + 1, MAX_DIM // 2 + 1)))


CPN_A_SPECS = (
    ParamSpec("n", 2, description="intrinsic dimension"),
    ParamSpec("ell", 1, description="number of Legendrian blocks"),
) + tuple(ParamSpec(f"a{j}", 1.0, 0.5, 1.5) for j in range(1, MAX_DIM // 2 + 1))

register(ImmersionFamily(
    id="cpn-warped-a",
    source="warped family of curvature one: unit Legendrian blocks weighted by sphere weights, l <= (n+1)/2",
    specs=CPN_A_SPECS,
    constraints=(
        whole("n", 2, MAX_DIM),
        Constraint("1 <= l <= (n+1)/2", "1 <= l <= (n+1)/2",
                   lambda p: float(p["ell"]).is_integer() and 1 <= p["ell"] and 2 * p["ell"] <= p["n"] + 1),
        Constraint("a_j > 0 for j <= l", "a_j > 0",
                   lambda p: all(p[f"a{j}"] > 0 for j in range(1, int(p["ell"]) + 1))),
    ),
    terms=_cpn_warped_a,
    advertised_metric=_cpn_warped_a_metric,
    tier=Tier.B, manifest_key="cpn-warped:a",
    note="the weight printed as cos x_{l+1} is read as the sphere weight in theta_{l+1}",
    **default_shape(_cpn_warped_a_shape, CPN_A_SPECS),
))


def _cpn_warped_b(p):
    ell = int(p["ell"])
    n = 2 * ell - 1
    weights = sphere_weights(n, tuple(range(ell, n)), ell)
    blocks = [unit_block(n, j, p[f"a{j + 1}"], odd=True) for j in range(ell)]
    return ([times(first, weights[j]) for j, (first, _) in enumerate(blocks)]
            + [times(second, weights[j]) for j, (_, second) in enumerate(blocks)])


def _cpn_warped_b_metric(P, p):
    ell = int(p["ell"])
    n = 2 * ell - 1
    return _block_metric(P, p, ell, tuple(range(ell, n)), n)


def _cpn_warped_b_shape(p) -> Shape:
    ell = int(p["ell"])
    return _block_shape(2 * ell - 1, ell, (f"a{j}" for j in range(ell + 1, MAX_ODD_BLOCKS + 1)))


CPN_B_SPECS = (ParamSpec("ell", 2, description="number of odd Legendrian blocks; n = 2l - 1"),) + tuple(
    ParamSpec(f"a{j}", default, 0.5, 1.5) for j, default in ((1, 1.0), (2, 0.7), (3, 1.2)))

register(ImmersionFamily(
    id="cpn-warped-b",
    source="warped family of curvature one with odd Legendrian blocks, n = 2l - 1",
    specs=CPN_B_SPECS,
    constraints=(
        whole("ell", 2, MAX_ODD_BLOCKS),
        Constraint("a_j > 0 for j <= l", "a_j > 0",
                   lambda p: all(p[f"a{j}"] > 0 for j in range(1, int(p["ell"]) + 1))),
    ),
    terms=_cpn_warped_b,
    advertised_metric=_cpn_warped_b_metric,
    tier=Tier.B, manifest_key="cpn-warped:b",
    **default_shape(_cpn_warped_b_shape, CPN_B_SPECS),
))


# =============================================================================
# CP^3 FAMILIES WITH POSITIVE RELATIVE NULLITY
# =============================================================================

def _rp3(p):
    n = 3
    cx, sx = cos_of(axis(n, 0)), sin_of(axis(n, 0))
    cy, sy = cos_of(axis(n, 1)), sin_of(axis(n, 1))
    cz, sz = cos_of(axis(n, 2)), sin_of(axis(n, 2))
    return [cx, times(sx, cy), times(sx, sy, cz), times(sx, sy, sz)]


register(ImmersionFamily(
    id="cp3-rp3",
    source="totally geodesic RP^3(1) in CP^3",
    ambient=CP3, ell=0,
    specs=(), constraints=(),
    box=((0.3, 1.2), (0.3, 1.2), (-1.0, 1.0)),
    terms=_rp3,
    nullity=(3, 3),
    tier=Tier.B, manifest_key="cp3-nullity:1",
))


def _cp3_rational(P, p):
    a, b, c = p["a"], p["b"], p["c"]
    chat = np.hypot(b, c)
    delta = 0.5 * np.sqrt(1.0 + 4.0 * a * a + chat * chat)
    x, y, s = P[:, 0], P[:, 1], P[:, 2]
    q = 1.0 + x * x + y * y
    phi = (a * (1.0 - x * x - y * y) + b * x + c * y) / q
    phase = np.exp(0.5j * s)
    shift = 2.0 * (chat + 2j * a) * phi / (chat * (4.0 * a * a + chat * chat))
    return np.stack([
        phi * phase * np.sin(delta * s) / delta,
        phi * phase * (2.0 * delta * np.cos(delta * s) - 1j * np.sin(delta * s))
        / (delta * np.sqrt(4.0 * a * a + chat * chat)),
        (2.0 * chat * x + 1j * b * (1.0 - x * x - y * y)) / (chat * q) - b * shift,
        (2.0 * chat * y + 1j * c * (1.0 - x * x - y * y)) / (chat * q) - c * shift,
    ], axis=1)


register(ImmersionFamily(
    id="cp3-rational",
    source="CP^3 family in (x, y, s) with phi = (a(1-x^2-y^2)+bx+cy)/(1+x^2+y^2), as printed",
    ambient=CP3, ell=0,
    specs=(ParamSpec("a", 1.0, 0.5, 1.5), ParamSpec("b", 1.0, 0.5, 1.5), ParamSpec("c", 0.5, 0.2, 1.0)),
    constraints=(Constraint("b^2 + c^2 != 0", "hat c != 0", lambda p: p["b"] ** 2 + p["c"] ** 2 > 0),),
    box=((-1.0, 1.0), (-1.0, 1.0), (-2.0, 2.0)),
    evaluator=_cp3_rational,
    nullity=(1, 3),
    tier=Tier.B, manifest_key="cp3-nullity:2",
    note="long rational display transcribed as printed",
))


def _cp3_tanh(P, p):
    b = p["b"]
    x, s, t = P[:, 0], P[:, 1], P[:, 2]
    rate = np.sqrt(1.0 + 2.0 * b) / np.sqrt(2.0 * b)
    tail = np.sqrt(2.0 * b) * np.exp(1j * s / np.sqrt(2.0 * b)) / (np.cosh(s) * np.sqrt(1.0 + 2.0 * b))
    cos_x = np.cos(x)
    return np.stack([
        np.sin(x),
        cos_x * (2.0 * b * np.tanh(s) + 1j * np.sqrt(2.0 * b)) / np.sqrt(2.0 + 4.0 * b),
        cos_x * tail * np.cos(rate * t),
        cos_x * tail * np.sin(rate * t),
    ], axis=1)


register(ImmersionFamily(
    id="cp3-tanh",
    source="CP^3 family cos x (tan x, (2b tanh s + i sqrt(2b))/sqrt(2+4b), sech s blocks in t), as printed",
    ambient=CP3, ell=0,
    specs=(ParamSpec("b", 1.0, 0.5, 1.5),), constraints=(positive("b"),),
    box=((-1.2, 1.2), (-2.0, 2.0), (-2.0, 2.0)),
    evaluator=_cp3_tanh,
    nullity=(1, 3),
    tier=Tier.B, manifest_key="cp3-nullity:3", ledgered=("quadric", "contact", "isotropy"),
    note="as printed the entries have squared norm one and are horizontal only at b = 1",
))


def _cp3_two_blocks(p):
    n = 3
    out = []
    for index, amp in ((1, p["a"]), (2, p["b"])):
        beta = np.sqrt(1.0 + 4.0 * amp * amp)
        phase = exp_of(axis(n, index, 0.5j))
        s = times(phase, sin_of(axis(n, index, beta / 2.0)))
        c = times(phase, cos_of(axis(n, index, beta / 2.0)))
        out.append((plus(c, scaled(1j / beta, s)), scaled(2.0 * amp / beta, s)))
    (y_main, y_side), (z_main, z_side) = out
    cx, sx = cos_of(axis(n, 0)), sin_of(axis(n, 0))
    return [times(y_main, cx), times(y_side, cx), times(z_side, cx), times(z_main, sx)]


register(ImmersionFamily(
    id="cp3-two-blocks",
    source="CP^3 family of two Legendrian blocks in y and z weighted by cos x and sin x, as printed",
    ambient=CP3, ell=0,
    specs=(ParamSpec("a", 1.0, 0.5, 1.5), ParamSpec("b", 0.5, 0.3, 1.5)), constraints=(positive("a", "b"),),
    box=((0.2, 1.3), (-2.0, 2.0), (-2.0, 2.0)),
    terms=_cp3_two_blocks,
    nullity=(1, 3),
    tier=Tier.B, manifest_key="cp3-nullity:4", ledgered=("quadric", "contact", "isotropy"),
    note="blocks printed with cos + i sin/beta are not Legendrian; the third entry carries cos x as printed",
))


def _sphere_join(inner, P):
    x = P[:, 0]
    return np.column_stack([np.sin(x), inner.evaluate(P[:, 1:]) * np.cos(x)[:, None]])


register(ImmersionFamily(
    id="cp3-composed",
    source="(sin x, L(y, z) cos x) around a horizontal lift L of a type II surface of CP^2",
    ambient=CP3, ell=0,
    specs=(), constraints=(),
    box=((-1.2, 1.2), (-2.0, 2.0), (-2.0, 2.0)),
    compose=_sphere_join,
    inner_kind=ModelKind.SPHERICAL, inner_default="cp2-sech-pair",
    nullity=(1, 3),
    tier=Tier.B, manifest_key="cp3-nullity:5",
    note="parameters are forwarded to the inner surface",
))
