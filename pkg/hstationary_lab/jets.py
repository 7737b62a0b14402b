#!/usr/bin/env python3
"""
IMMERSION JETS

Value, gradient and Hessian of a closed-form immersion at a chart point.

This module:
1. Differentiates vectorised evaluators by central differences at h and h/2
2. Combines the two levels with one Richardson step (order h^4)
3. Evaluates exact jets of exponential-polynomial entries when a family
   registers them, keeping the finite-difference jet for cross-checks
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

from .ambient import CVector, Signature
from .config import DEFAULT_STEP
from .errors import DimensionError

logger = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Jet2:
    """Value, first and second partials of an immersion at one chart point"""
    point: np.ndarray
    value: np.ndarray
    grad: np.ndarray
    hess: np.ndarray
    signature: Signature
    analytic: bool = False

    def __post_init__(self):
        n = self.point.shape[0]
        m = len(self.signature)
        if self.value.shape != (m,) or self.grad.shape != (n, m) or self.hess.shape != (n, n, m):
            raise DimensionError(
                f"jet shapes {self.value.shape}, {self.grad.shape}, {self.hess.shape} "
                f"do not match n={n}, m={m}"
            )

    @property
    def n(self) -> int:
        return self.point.shape[0]

    @property
    def m(self) -> int:
        return self.value.shape[0]

    def value_vector(self) -> CVector:
        return CVector(self.value, self.signature)

    def tangents(self) -> List[CVector]:
        return [CVector(self.grad[j], self.signature) for j in range(self.n)]

    def rotated(self, phase: float) -> "Jet2":
        """The same jet for the lift e^{i phase} z."""
        u = np.exp(1j * phase)
        return Jet2(self.point, u * self.value, u * self.grad, u * self.hess, self.signature, self.analytic)


# =============================================================================
# RICHARDSON CENTRAL DIFFERENCES
# =============================================================================

def richardson(coarse: np.ndarray, fine: np.ndarray, order: int = 2, ratio: float = 2.0) -> np.ndarray:
    """One Richardson level for a pair of approximations at h and h/ratio."""
    factor = ratio ** order
    return (factor * fine - coarse) / (factor - 1.0)


def _stencil_points(p: np.ndarray, h: float) -> np.ndarray:
    """Centre, +-h e_j and the four corners of every (j<k) plane."""
    n = p.shape[0]
    eye = np.eye(n)
    pts = [p]
    for j in range(n):
        pts.append(p + h * eye[j])
        pts.append(p - h * eye[j])
    for j in range(n):
        for k in range(j + 1, n):
            for sj, sk in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                pts.append(p + h * (sj * eye[j] + sk * eye[k]))
    return np.array(pts)


def _central(values: np.ndarray, n: int, h: float) -> Tuple[np.ndarray, np.ndarray]:
    f0 = values[0]
    grad = np.empty((n,) + f0.shape, dtype=complex)
    hess = np.empty((n, n) + f0.shape, dtype=complex)
    for j in range(n):
        fp, fm = values[1 + 2 * j], values[2 + 2 * j]
        grad[j] = (fp - fm) / (2.0 * h)
        hess[j, j] = (fp - 2.0 * f0 + fm) / (h * h)
    idx = 1 + 2 * n
    for j in range(n):
        for k in range(j + 1, n):
            fpp, fpm, fmp, fmm = values[idx:idx + 4]
            idx += 4
            hess[j, k] = (fpp - fpm - fmp + fmm) / (4.0 * h * h)
            hess[k, j] = hess[j, k]
    return grad, hess


def fd_jet(evaluate: Evaluator, p: np.ndarray, step: float = DEFAULT_STEP) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Richardson-refined central-difference jet of a vectorised map.

    Args:
        evaluate: maps an array of chart points (k, n) to values (k, m)
        p: chart point
        step: coarse step h; the fine level uses h/2

    Returns:
        (value, grad, hess) with hess symmetric entry for entry
    """
    p = np.asarray(p, dtype=float)
    n = p.shape[0]
    coarse_pts = _stencil_points(p, step)
    fine_pts = _stencil_points(p, step / 2.0)
    values = np.asarray(evaluate(np.vstack([coarse_pts, fine_pts])), dtype=complex)
    half = coarse_pts.shape[0]
    g1, h1 = _central(values[:half], n, step)
    g2, h2 = _central(values[half:], n, step / 2.0)
    grad = richardson(g1, g2)
    hess = richardson(h1, h2)
    for j in range(n):
        for k in range(j + 1, n):
            hess[k, j] = hess[j, k]
    return values[0], grad, hess


def batch_fd_jets(evaluate: Evaluator, P: np.ndarray,
                  step: float = DEFAULT_STEP) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    fd_jet over many chart points in one evaluator call per level.

    Returns:
        values (k, m), grads (k, n, m), hessians (k, n, n, m)
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    k, n = P.shape
    levels = []
    for h in (step, step / 2.0):
        offsets = _stencil_points(np.zeros(n), h)
        points = (offsets[:, None, :] + P[None, :, :]).reshape(-1, n)
        values = np.asarray(evaluate(points), dtype=complex).reshape(offsets.shape[0], k, -1)
        levels.append((values[0],) + _central(values, n, h))
    grad = richardson(levels[0][1], levels[1][1])
    hess = richardson(levels[0][2], levels[1][2])
    return levels[0][0], np.moveaxis(grad, 1, 0), np.moveaxis(hess, 2, 0)


# =============================================================================
# EXACT JETS OF EXPONENTIAL POLYNOMIALS
# =============================================================================

@dataclass(frozen=True)
class ExpTerm:
    """coefficient * prod_k x_k^powers[k] * exp(rates . x)"""
    coefficient: complex
    rates: Tuple[complex, ...]
    powers: Tuple[int, ...] = ()


@dataclass(frozen=True)
class TermTable:
    """
    Exponential-polynomial entries compiled to arrays.

    Row t of coefficients/rates/powers is one term; selector[t, a] is 1 when
    the term belongs to entry a.
    """
    coefficients: np.ndarray
    rates: np.ndarray
    powers: np.ndarray
    selector: np.ndarray

    @property
    def n(self) -> int:
        return self.rates.shape[1]

    @property
    def m(self) -> int:
        return self.selector.shape[1]


def compile_terms(entries: Sequence[Sequence[ExpTerm]], n: int) -> TermTable:
    """Flatten per-entry term lists into a TermTable over n chart coordinates."""
    coefficients, rates, powers, owner = [], [], [], []
    for a, terms in enumerate(entries):
        for term in terms:
            if len(term.rates) != n or (term.powers and len(term.powers) != n):
                raise DimensionError(f"term of entry {a} is not over {n} coordinates")
            coefficients.append(complex(term.coefficient))
            rates.append(term.rates)
            powers.append(term.powers or (0,) * n)
            owner.append(a)
    selector = np.zeros((len(owner), len(entries)))
    selector[np.arange(len(owner)), owner] = 1.0
    return TermTable(
        coefficients=np.asarray(coefficients, dtype=complex),
        rates=np.asarray(rates, dtype=complex).reshape(-1, n),
        powers=np.asarray(powers, dtype=int).reshape(-1, n),
        selector=selector,
    )


def table_values(table: TermTable, P: np.ndarray) -> np.ndarray:
    """Entries at every row of P (k, n) -> (k, m)."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    growth = table.coefficients[None, :] * np.exp(P @ table.rates.T)
    if np.any(table.powers):
        growth = growth * np.prod(P[:, None, :] ** table.powers[None, :, :], axis=2)
    return growth @ table.selector


def exp_polynomial_jet(table: TermTable, p: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Exact (value, grad, hess) of a compiled exponential polynomial at p."""
    p = np.asarray(p, dtype=float)
    n, lam, pw = table.n, table.rates, table.powers
    count = pw.shape[0]
    e = table.coefficients * np.exp(lam @ p)

    m0 = np.ones(count)
    m1 = np.zeros((count, n))
    m2 = np.zeros((count, n, n))
    if np.any(pw):
        base = p[None, :] ** pw
        d1 = np.where(pw > 0, pw * p[None, :] ** np.maximum(pw - 1, 0), 0.0)
        d2 = np.where(pw > 1, pw * (pw - 1) * p[None, :] ** np.maximum(pw - 2, 0), 0.0)
        m0 = np.prod(base, axis=1)
        for j in range(n):
            rest = np.prod(np.delete(base, j, axis=1), axis=1)
            m1[:, j] = d1[:, j] * rest
            m2[:, j, j] = d2[:, j] * rest
            for k in range(j + 1, n):
                rest2 = np.prod(np.delete(base, [j, k], axis=1), axis=1)
                m2[:, j, k] = m2[:, k, j] = d1[:, j] * d1[:, k] * rest2

    value = (e * m0) @ table.selector
    grad = (e[:, None] * (m1 + lam * m0[:, None])).T @ table.selector
    second = (m2 + lam[:, :, None] * m1[:, None, :] + lam[:, None, :] * m1[:, :, None]
              + lam[:, :, None] * lam[:, None, :] * m0[:, None, None])
    hess = np.tensordot(e[:, None, None] * second, table.selector, axes=(0, 0))
    return value, grad, hess


# =============================================================================
# PUBLIC OPERATION
# =============================================================================

def evaluate_jet(handle, p, step: float = DEFAULT_STEP, prefer_analytic: bool = True) -> Jet2:
    """
    Jet of a bound immersion at a chart point.

    The point must clear every domain predicate by 2*step. Exact jets are
    returned when the family registers them and prefer_analytic is set.
    """
    p = np.asarray(p, dtype=float)
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    handle.check_point(p, margin=2.0 * step)
    signature = handle.family.ambient.signature
    table = handle.term_table() if prefer_analytic else None
    if table is not None:
        value, grad, hess = exp_polynomial_jet(table, p)
        return Jet2(p, value, grad, hess, signature, analytic=True)
    value, grad, hess = fd_jet(handle.evaluate, p, step)
    return Jet2(p, value, grad, hess, signature)


def max_jet_deviation(a: Jet2, b: Jet2) -> Tuple[float, float]:
    """Entry-wise max |grad| and |hess| deviations between two jets."""
    return float(np.max(np.abs(a.grad - b.grad))), float(np.max(np.abs(a.hess - b.hess)))


def jet_of(evaluate: Evaluator, p: np.ndarray, signature: Signature, step: float = DEFAULT_STEP) -> Jet2:
    """Finite-difference jet of a bare evaluator (no domain bookkeeping)."""
    value, grad, hess = fd_jet(evaluate, p, step)
    return Jet2(np.asarray(p, dtype=float), value, grad, hess, signature)
