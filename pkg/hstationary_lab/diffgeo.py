#!/usr/bin/env python3
"""
DIFFERENTIAL GEOMETRY OF IMMERSIONS

Intrinsic and extrinsic geometry of an immersion (or of a horizontal lift)
computed from its 2-jets.

This module:
1. Builds the induced metric, Christoffel symbols, second fundamental form,
   mean curvature, JH and the cubic form at a chart point
2. Differentiates those fields across an outer stencil for sectional
   curvature, div JH and the Codazzi tensor
3. Measures the pattern, normality, cubic-symmetry, normal-connection and
   fiber-invariance residuals
4. Counts relative nullity from the numerical rank of h
5. Compares the first variation of volume under a Hamiltonian bump with
   -n times the integral of f div JH (flat ambient only)
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence, Tuple

import numpy as np

from .ambient import AmbientModel, inner, project_horizontal
from .config import DEFAULT_STEP, OUTER_STEP, RANK_TOL
from .errors import DegeneracyError, DimensionError, DomainError, SupportError, UnsupportedModelError
from .jets import Jet2, batch_fd_jets, evaluate_jet, richardson

logger = logging.getLogger(__name__)

DEGENERACY_FLOOR = 1e-12


@dataclass(frozen=True)
class GeometryAtPoint:
    """
    Geometry of an immersion at one chart point.

    christoffel[l, j, k] is Gamma^l_{jk}; h[j, k] is the ambient vector
    h(d_j, d_k); jh[k] are the coordinate components of JH; cubic[j, k, l]
    is Re<h(d_j, d_k), i d_l>.
    """
    jet: Jet2
    model: AmbientModel
    g: np.ndarray
    g_inv: np.ndarray
    christoffel: np.ndarray
    h: np.ndarray
    H: np.ndarray
    jh: np.ndarray
    cubic: np.ndarray
    min_eigenvalue: float

    @property
    def n(self) -> int:
        return self.g.shape[0]

    @property
    def sqrt_det(self) -> float:
        return float(np.sqrt(np.linalg.det(self.g)))


# =============================================================================
# POINTWISE GEOMETRY
# =============================================================================

def _tangential(v: np.ndarray, G: np.ndarray, g_inv: np.ndarray, signs: np.ndarray) -> np.ndarray:
    """Orthogonal projection of ambient vectors (..., m) onto span_R(G_1..G_n)."""
    c = np.real(np.einsum("...a,la,a->...l", v, np.conj(G), signs))
    return np.einsum("...l,lp,pa->...a", c, g_inv, G)


def _normal_part(v: np.ndarray, geom: GeometryAtPoint) -> np.ndarray:
    signs = geom.model.signs
    if geom.model.is_lift:
        v = project_horizontal(v, geom.jet.value, signs)
    return v - _tangential(v, geom.jet.grad, geom.g_inv, signs)


def metric_matrix(jet: Jet2, signs: np.ndarray) -> np.ndarray:
    G = jet.grad
    g = np.real(np.einsum("ja,ka,a->jk", G, np.conj(G), signs))
    return 0.5 * (g + g.T)


def min_metric_eigenvalue(jet: Jet2, model: AmbientModel) -> float:
    return float(np.linalg.eigvalsh(metric_matrix(jet, model.signs))[0])


def induced_metric(jet: Jet2, model: AmbientModel = None) -> np.ndarray:
    """
    g_jk = Re<d_j L, d_k L> with the jet's signature.

    Raises:
        DegeneracyError: g is not positive definite
    """
    signs = model.signs if model is not None else jet.signature.array
    g = metric_matrix(jet, signs)
    eigenvalues = np.linalg.eigvalsh(g)
    if eigenvalues[0] <= DEGENERACY_FLOOR * max(1.0, abs(eigenvalues[-1])):
        raise DegeneracyError(float(eigenvalues[0]))
    return g


def lagrangian_residual(jet: Jet2) -> float:
    """max_{j,k} |Im<d_j L, d_k L>|"""
    G = jet.grad
    products = np.einsum("ja,ka,a->jk", G, np.conj(G), jet.signature.array)
    return float(np.max(np.abs(np.imag(products))))


def second_fundamental_form(jet: Jet2, model: AmbientModel) -> GeometryAtPoint:
    """
    Metric, Christoffel symbols and h from a jet.

    h(d_j, d_k) is the Hessian minus its tangential part; for lifts the z and
    iz components are removed as well, which accounts for the quadric term
    and the fiber direction at once.

    Raises:
        DimensionError: the jet is not valued in the model's C^m
        DegeneracyError: degenerate induced metric
    """
    if jet.m != model.m:
        raise DimensionError(f"jet has {jet.m} complex entries, ambient {model.label()} needs {model.m}")
    signs = model.signs
    G = jet.grad
    n = jet.n
    g = induced_metric(jet, model)
    g_inv = np.linalg.inv(g)

    c = np.real(np.einsum("jka,la,a->jkl", jet.hess, np.conj(G), signs))
    christoffel = np.einsum("pl,jkl->pjk", g_inv, c)
    h = jet.hess - np.einsum("pjk,pa->jka", christoffel, G)
    if model.is_lift:
        h = project_horizontal(h, jet.value, signs)

    H = np.einsum("jk,jka->a", g_inv, h) / n
    jh = g_inv @ np.real(np.einsum("a,la,a->l", 1j * H, np.conj(G), signs))
    cubic = np.real(np.einsum("jka,la,a->jkl", h, np.conj(1j * G), signs))
    return GeometryAtPoint(
        jet=jet, model=model, g=g, g_inv=g_inv, christoffel=christoffel, h=h, H=H, jh=jh, cubic=cubic,
        min_eigenvalue=float(np.linalg.eigvalsh(g)[0]),
    )


def mean_curvature(geom: GeometryAtPoint) -> np.ndarray:
    return geom.H


def relative_nullity(geom: GeometryAtPoint, rank_tol: float = RANK_TOL) -> int:
    """
    n minus the numerical rank of X -> h(X, .).

    Singular values below rank_tol * sigma_max count as zero, and so does
    everything when sigma_max itself is below rank_tol.
    """
    n = geom.n
    rows = geom.h.reshape(n, -1)
    matrix = np.concatenate([rows.real, rows.imag], axis=1)
    sigma = np.linalg.svd(matrix, compute_uv=False)
    if sigma.size == 0 or sigma[0] < rank_tol:
        return n
    return n - int(np.sum(sigma > rank_tol * sigma[0]))


# =============================================================================
# POINTWISE RESIDUALS
# =============================================================================

def h_normality_residual(geom: GeometryAtPoint) -> float:
    """max |Re<h_jk, d_l L>|, plus the z and iz components for lifts."""
    signs = geom.model.signs
    out = np.max(np.abs(np.real(np.einsum("jka,la,a->jkl", geom.h, np.conj(geom.jet.grad), signs))))
    if geom.model.is_lift:
        z = geom.jet.value
        for w in (z, 1j * z):
            out = max(out, np.max(np.abs(np.real(inner(geom.h, w, signs)))))
    return float(out)


def cubic_symmetry_residual(geom: GeometryAtPoint) -> float:
    C = geom.cubic
    return float(max(np.max(np.abs(C - np.transpose(C, perm))) for perm in itertools.permutations(range(3))))


def normal_connection_residual(geom: GeometryAtPoint) -> float:
    """max |normal part of d_j(i d_k L) - i (tangential part of d_j d_k L)|"""
    tangential = np.einsum("pjk,pa->jka", geom.christoffel, geom.jet.grad)
    return float(np.max(np.abs(_normal_part(1j * geom.jet.hess, geom) - 1j * tangential)))


def pattern_residual(geom: GeometryAtPoint, coords: Sequence[int], kappa: float = 1.0) -> float:
    """
    Deviation from h(d_j, d_j) = kappa J d_j and h(d_j, d_k) = 0 (k != j)
    for every j in coords.
    """
    out = 0.0
    G = geom.jet.grad
    for j in coords:
        out = max(out, np.max(np.abs(geom.h[j, j] - kappa * 1j * G[j])))
        for k in range(geom.n):
            if k != j:
                out = max(out, np.max(np.abs(geom.h[j, k])))
    return float(out)


def fiber_invariance_residual(jet: Jet2, model: AmbientModel, phase: float) -> float:
    """
    Max change of every pointwise quantity when the lift z is replaced by
    e^{i phase} z; vector quantities are compared after rotating back.
    """
    base = second_fundamental_form(jet, model)
    turned = second_fundamental_form(jet.rotated(phase), model)
    u = np.exp(1j * phase)
    diffs = [
        np.max(np.abs(base.g - turned.g)),
        np.max(np.abs(base.christoffel - turned.christoffel)),
        np.max(np.abs(base.cubic - turned.cubic)),
        np.max(np.abs(base.jh - turned.jh)),
        np.max(np.abs(u * base.h - turned.h)),
        np.max(np.abs(u * base.H - turned.H)),
        abs(lagrangian_residual(jet) - lagrangian_residual(jet.rotated(phase))),
    ]
    return float(max(diffs))


# =============================================================================
# NESTED STENCILS
# =============================================================================

def geometry_at(handle, p, step: float = DEFAULT_STEP) -> GeometryAtPoint:
    return second_fundamental_form(evaluate_jet(handle, p, step), handle.family.ambient)


def _outer_gradient(field: Callable[[np.ndarray], np.ndarray], p: np.ndarray, outer: float) -> np.ndarray:
    """Richardson central differences of a field at steps outer and outer/2; axis 0 is the direction."""
    eye = np.eye(p.shape[0])
    rows = []
    for a in range(p.shape[0]):
        levels = [(field(p + h * eye[a]) - field(p - h * eye[a])) / (2.0 * h) for h in (outer, outer / 2.0)]
        rows.append(richardson(*levels))
    return np.stack(rows)


def _prepare(handle, p, step: float, outer: float) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if outer <= 0 or step <= 0:
        raise ValueError(f"steps must be positive, got step={step}, outer={outer}")
    handle.check_point(p, margin=outer + 2.0 * step)
    return p


def curvature_components(handle, p, step: float = DEFAULT_STEP,
                         outer: float = OUTER_STEP) -> Tuple[np.ndarray, np.ndarray]:
    """
    Sectional curvatures of the coordinate planes, intrinsic and from the
    Gauss equation, as (n, n) arrays (diagonal zero).
    """
    p = _prepare(handle, p, step, outer)
    geom = geometry_at(handle, p, step)
    n = geom.n
    eps = handle.family.ambient.epsilon
    gamma = geom.christoffel
    dgamma = _outer_gradient(lambda q: geometry_at(handle, q, step).christoffel, p, outer)
    signs = geom.model.signs

    intrinsic = np.zeros((n, n))
    gauss = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            R = (dgamma[i, :, j, j] - dgamma[j, :, i, j]
                 + gamma[:, i, :] @ gamma[:, j, j] - gamma[:, j, :] @ gamma[:, i, j])
            area = geom.g[i, i] * geom.g[j, j] - geom.g[i, j] ** 2
            intrinsic[i, j] = float(geom.g[i] @ R) / area
            extrinsic = (np.real(inner(geom.h[i, i], geom.h[j, j], signs))
                         - np.real(inner(geom.h[i, j], geom.h[i, j], signs)))
            gauss[i, j] = eps + extrinsic / area
    return intrinsic, gauss


def sectional_curvature_residual(handle, p, step: float = DEFAULT_STEP, outer: float = OUTER_STEP) -> float:
    """
    max over coordinate planes of |K - epsilon| and |K - K_gauss|; zero for curves.

    Raises:
        DomainError: the outer stencil leaves the admissible domain
    """
    if handle.family.n < 2:
        return 0.0
    intrinsic, gauss = curvature_components(handle, p, step, outer)
    eps = handle.family.ambient.epsilon
    mask = ~np.eye(intrinsic.shape[0], dtype=bool)
    return float(max(np.max(np.abs(intrinsic - eps)[mask]), np.max(np.abs(intrinsic - gauss)[mask])))


def div_jh(handle, p, step: float = DEFAULT_STEP, outer: float = OUTER_STEP) -> float:
    """(1/sqrt det g) d_k (sqrt det g (JH)^k), signed."""
    p = _prepare(handle, p, step, outer)
    geom = geometry_at(handle, p, step)

    def weighted(q):
        other = geometry_at(handle, q, step)
        return other.sqrt_det * other.jh

    return float(np.trace(_outer_gradient(weighted, p, outer)) / geom.sqrt_det)


def codazzi_residual(handle, p, step: float = DEFAULT_STEP, outer: float = OUTER_STEP) -> float:
    """max |(nabla h)(d_a, d_j, d_k) - (nabla h)(d_j, d_a, d_k)| with nabla h from a stencil of h."""
    p = _prepare(handle, p, step, outer)
    geom = geometry_at(handle, p, step)
    dh = _outer_gradient(lambda q: geometry_at(handle, q, step).h, p, outer)
    normal = _normal_part(dh, geom)
    gamma, h = geom.christoffel, geom.h
    nabla = (normal
             - np.einsum("laj,lkb->ajkb", gamma, h)
             - np.einsum("lak,jlb->ajkb", gamma, h))
    return float(np.max(np.abs(nabla - np.transpose(nabla, (1, 0, 2, 3)))))


# =============================================================================
# FIRST VARIATION (FLAT AMBIENT)
# =============================================================================

@dataclass(frozen=True)
class Bump:
    """f = amplitude * exp(-1/(1 - rho^2)) for rho = |x - center|/radius < 1"""
    center: Tuple[float, ...]
    radius: float
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"bump radius must be positive, got {self.radius}")

    def values(self, P: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """f (k,) and its gradient (k, n); both vanish outside the support."""
        c = np.asarray(self.center, dtype=float)
        d = (P - c) / self.radius
        rho2 = np.sum(d * d, axis=1)
        inside = rho2 < 1.0
        f = np.zeros(P.shape[0])
        grad = np.zeros_like(P)
        q = 1.0 - rho2[inside]
        f[inside] = self.amplitude * np.exp(-1.0 / q)
        grad[inside] = (f[inside] * (-2.0 / q ** 2))[:, None] * d[inside] / self.radius
        return f, grad


class FirstVariation(NamedTuple):
    dvol: float
    predicted: float


def _flat_fields(handle, P: np.ndarray, step: float):
    """Tangent frame, metric inverse, sqrt det g and JH components at many points of a flat immersion."""
    _, G, hess = batch_fd_jets(handle.evaluate, P, step)
    g = np.real(np.einsum("kja,kla->kjl", G, np.conj(G)))
    g_inv = np.linalg.inv(g)
    c = np.real(np.einsum("kjla,kma->kjlm", hess, np.conj(G)))
    gamma = np.einsum("kpm,kjlm->kpjl", g_inv, c)
    h = hess - np.einsum("kpjl,kpa->kjla", gamma, G)
    H = np.einsum("kjl,kjla->ka", g_inv, h) / P.shape[1]
    jh = np.einsum("kpl,kl->kp", g_inv, np.real(np.einsum("ka,kla->kl", 1j * H, np.conj(G))))
    return G, g_inv, np.sqrt(np.linalg.det(g)), jh


def _support_check(handle, bump: Bump, pad: float):
    c = np.asarray(bump.center, dtype=float)
    n = handle.family.n
    if c.shape != (n,):
        raise DimensionError(f"bump center needs {n} coordinates, got {c.shape[0]}")
    corners = [c + bump.radius * np.array(signs) for signs in itertools.product((-1.0, 1.0), repeat=n)]
    for q in [c] + corners:
        try:
            handle.check_point(q, margin=pad)
        except DomainError as exc:
            raise SupportError(f"bump support [{c - bump.radius}, {c + bump.radius}] leaves the patch: "
                               f"{exc.predicate}") from exc


def gauss_patch(bump: Bump, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Tensor Gauss-Legendre nodes and weights on the cube around the bump support."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    c = np.asarray(bump.center, dtype=float)
    n = c.shape[0]
    grid = np.stack(np.meshgrid(*[x] * n, indexing="ij"), axis=-1).reshape(-1, n)
    weights = np.prod(np.stack(np.meshgrid(*[w] * n, indexing="ij"), axis=-1).reshape(-1, n), axis=1)
    return c + bump.radius * grid, weights * bump.radius ** n


def patch_volume(handle, bump: Bump, nodes: int = 40, step: float = DEFAULT_STEP) -> float:
    X, W = gauss_patch(bump, nodes)
    _, _, sqrt_det, _ = _flat_fields(handle, X, step)
    return float(np.sum(W * sqrt_det))


def first_variation(handle, bump: Bump, t_step: float = 1e-4, step: float = DEFAULT_STEP,
                    outer: float = OUTER_STEP, nodes: int = 40) -> FirstVariation:
    """
    (dVol/dt at t = 0, -n * integral of f div JH dM) for L_t = L + t J grad f.

    dVol/dt comes from a central difference in t of the quadrature volume of
    L_t; the prediction integrates the stencil div JH on the same nodes.

    Raises:
        UnsupportedModelError: the immersion is not in a flat ambient
        SupportError: the bump support is not strictly inside the chart patch
    """
    if handle.family.ambient.is_lift:
        raise UnsupportedModelError("first variation is implemented for flat ambients only")
    n = handle.family.n
    _support_check(handle, bump, outer + 4.0 * step)

    X, W = gauss_patch(bump, nodes)
    f, _ = bump.values(X)
    inside = np.sum(((X - np.asarray(bump.center)) / bump.radius) ** 2, axis=1) < 1.0
    X, W, f = X[inside], W[inside], f[inside]
    if X.shape[0] == 0:
        return FirstVariation(0.0, 0.0)

    def field(Q):
        G, g_inv, _, _ = _flat_fields(handle, Q, step)
        _, df = bump.values(Q)
        coefficients = np.einsum("kjl,kl->kj", g_inv, df)
        return handle.evaluate(Q), 1j * np.einsum("kj,kja->ka", coefficients, G)

    eye = np.eye(n)
    tangents_L, tangents_V = [], []
    for j in range(n):
        shifted = [field(X + s * step * eye[j]) for s in (2.0, 1.0, -1.0, -2.0)]
        for out, idx in ((tangents_L, 0), (tangents_V, 1)):
            a, b, c, d = (item[idx] for item in shifted)
            out.append((-a + 8.0 * b - 8.0 * c + d) / (12.0 * step))
    TL = np.stack(tangents_L, axis=1)
    TV = np.stack(tangents_V, axis=1)

    def volume(t):
        T = TL + t * TV
        g = np.real(np.einsum("kja,kla->kjl", T, np.conj(T)))
        return float(np.sum(W * np.sqrt(np.linalg.det(g))))

    dvol = (volume(t_step) - volume(-t_step)) / (2.0 * t_step)

    def weighted(Q):
        _, _, sqrt_det, jh = _flat_fields(handle, Q, step)
        return sqrt_det[:, None] * jh

    divergence = np.zeros(X.shape[0])
    for a in range(n):
        levels = [(weighted(X + h * eye[a])[:, a] - weighted(X - h * eye[a])[:, a]) / (2.0 * h)
                  for h in (outer, outer / 2.0)]
        divergence += richardson(*levels)
    predicted = -n * float(np.sum(W * f * divergence))
    logger.debug("first variation of %s: dVol/dt=%.3e, predicted=%.3e", handle.label(), dvol, predicted)
    return FirstVariation(float(dvol), predicted)
