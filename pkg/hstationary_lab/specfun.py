#!/usr/bin/env python3
"""
SPECIAL FUNCTIONS

Complex-order Bessel functions for the flat Bessel surface.

This module:
1. Evaluates Gamma on the complex plane (Lanczos, g=7, with reflection)
2. Sums J_nu(z) = (z/2)^nu sum_j (-1)^j (z/2)^{2j} / (j! Gamma(nu+j+1))
3. Integrates t e^{i t^2} J_nu(t^2) with adaptive Gauss-Legendre panels
4. Cross-checks that integral with a Romberg T-table and a term-wise series
"""

import cmath
import heapq
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Tuple, Union

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError, QuadratureError

logger = logging.getLogger(__name__)

LANCZOS_G = 7
LANCZOS_COEFFICIENTS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

MAX_INTERVALS = 2 ** 14
_G7 = np.polynomial.legendre.leggauss(7)
_G15 = np.polynomial.legendre.leggauss(15)


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation rule for the Bessel series"""
    cutoff: float = 1e-16
    max_terms: int = 200

    def __post_init__(self):
        if self.cutoff <= 0:
            raise ValueError(f"cutoff must be positive, got {self.cutoff}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be at least 1, got {self.max_terms}")


DEFAULT_POLICY = SeriesPolicy()


# =============================================================================
# GAMMA
# =============================================================================

def _nonpositive_integer(z: complex) -> bool:
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def gamma_complex(z: Union[complex, float]) -> complex:
    """Gamma(z) for complex z off the poles 0, -1, -2, ..."""
    z = complex(z)
    if _nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        return cmath.pi / (cmath.sin(cmath.pi * z) * gamma_complex(1.0 - z))
    z -= 1.0
    x = LANCZOS_COEFFICIENTS[0]
    for i, coefficient in enumerate(LANCZOS_COEFFICIENTS[1:]):
        x += coefficient / (z + i + 1)
    t = z + LANCZOS_G + 0.5
    return cmath.sqrt(2.0 * cmath.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


def reciprocal_gamma(z: complex) -> complex:
    """1/Gamma(z), zero at the poles."""
    z = complex(z)
    if _nonpositive_integer(z):
        return 0j
    return 1.0 / gamma_complex(z)


# =============================================================================
# BESSEL J OF COMPLEX ORDER
# =============================================================================

def _first_index(nu: complex) -> int:
    """Leading terms with 1/Gamma(nu+j+1) = 0 vanish for negative integer nu."""
    if _nonpositive_integer(nu) and nu.real < 0:
        return int(-nu.real)
    return 0


def bessel_j_array(nu: complex, z, policy: SeriesPolicy = DEFAULT_POLICY) -> Tuple[np.ndarray, np.ndarray]:
    """
    Vectorised J_nu on the principal branch.

    Returns:
        (values, error estimates); the estimate is the first dropped term
    """
    nu = complex(nu)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(z == 0):
        if nu == 0:
            pass
        elif nu.real <= 0:
            raise DomainError("z != 0 when Re(nu) <= 0")
    half = z / 2.0
    with np.errstate(divide="ignore", invalid="ignore"):
        prefactor = np.where(z == 0, 0.0, np.exp(nu * np.log(np.where(z == 0, 1.0, half))))
    if nu == 0:
        prefactor = np.where(z == 0, 1.0, prefactor)
    step = -half * half

    j0 = _first_index(nu)
    term = np.full(z.shape, reciprocal_gamma(nu + j0 + 1) / math.factorial(j0), dtype=complex)
    term = term * step ** j0
    total = np.zeros(z.shape, dtype=complex)
    error = np.full(z.shape, np.nan)
    done = np.zeros(z.shape, dtype=bool)

    j = j0
    for count in range(policy.max_terms):
        total = total + np.where(done, 0.0, term)
        ratio = (j + 1) * (nu + j + 1)
        nxt = term * step / ratio
        settled = (~done) & (np.abs(nxt) <= policy.cutoff * np.maximum(np.abs(total), 1e-300)) \
            & (np.abs(step) < np.abs(ratio))
        error = np.where(settled, np.abs(nxt * prefactor), error)
        done = done | settled
        term = nxt
        j += 1
        if done.all():
            logger.debug("bessel series for nu=%s settled after %d terms", nu, count + 1)
            return prefactor * total, error
    raise ConvergenceError(policy.max_terms, float(np.max(np.abs(term[~done] * prefactor[~done]))))


def bessel_j(nu: complex, z: complex, policy: SeriesPolicy = DEFAULT_POLICY) -> Tuple[complex, float]:
    """J_nu(z) and the magnitude of the first dropped series term."""
    values, errors = bessel_j_array(nu, [z], policy)
    return complex(values[0]), float(errors[0])


# =============================================================================
# t e^{i t^2} J_nu(t^2) INTEGRALS
# =============================================================================

def fresnel_bessel_integrand(nu: complex, t: np.ndarray, policy: SeriesPolicy = DEFAULT_POLICY) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    u = t * t
    values, _ = bessel_j_array(nu, u, policy)
    return t * np.exp(1j * u) * values


def _check_limits(nu: complex, r: float, lower: float):
    if r < 0 or lower < 0:
        raise DomainError(f"integration limits must be non-negative, got [{lower}, {r}]")
    if lower == 0 and complex(nu).real <= -1:
        raise DomainError("Re(nu) > -1 for an integrable endpoint at 0")


def _panel(func: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> Tuple[complex, float]:
    mid, rad = 0.5 * (a + b), 0.5 * (b - a)
    x7, w7 = _G7
    x15, w15 = _G15
    values = func(np.concatenate([mid + rad * x7, mid + rad * x15]))
    coarse = rad * np.dot(w7, values[:7])
    fine = rad * np.dot(w15, values[7:])
    return complex(fine), float(abs(fine - coarse))


def adaptive_gauss(func: Callable[[np.ndarray], np.ndarray], a: float, b: float, tol: float,
                   max_intervals: int = MAX_INTERVALS) -> complex:
    """
    Globally adaptive Gauss-Legendre quadrature.

    Each panel is integrated with 7 and 15 nodes; the panel with the largest
    disagreement is bisected until the summed disagreement drops below tol.
    """
    if b == a:
        return 0j
    value, err = _panel(func, a, b)
    heap = [(-err, a, b, value)]
    total_err = err
    while total_err > tol:
        if len(heap) >= max_intervals:
            raise QuadratureError(len(heap), total_err)
        neg_err, lo, hi, _ = heapq.heappop(heap)
        total_err += neg_err
        mid = 0.5 * (lo + hi)
        for x0, x1 in ((lo, mid), (mid, hi)):
            v, e = _panel(func, x0, x1)
            heapq.heappush(heap, (-e, x0, x1, v))
            total_err += e
    logger.debug("adaptive quadrature on [%g, %g] used %d panels", a, b, len(heap))
    return complex(sum(item[3] for item in sorted(heap, key=lambda item: item[1])))


def fresnel_bessel_integral(nu: complex, r: float, tol: float = 1e-10, lower: float = 0.0,
                            policy: SeriesPolicy = DEFAULT_POLICY) -> complex:
    """Adaptive quadrature of the integral of t e^{i t^2} J_nu(t^2) from lower to r."""
    _check_limits(nu, r, lower)
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    return adaptive_gauss(lambda t: fresnel_bessel_integrand(nu, t, policy), lower, r, tol)


def romberg_integral(func: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                     tol: float = 1e-12, max_splits: int = 20) -> complex:
    """
    Romberg integration of a vectorised integrand over [a, b].

    The trapezoid sums are refined by halving and extrapolated along the
    T table; stops when two diagonal entries agree to tol (absolute).
    """
    span = b - a
    if span < 0:
        raise ValueError("integration limits must be in increasing order")
    if span == 0:
        return 0j
    ends = func(np.array([a, b]))
    summ = 0.5 * (ends[0] + ends[1])
    table = [[span * summ]]
    n = 1
    for m in range(1, max_splits + 1):
        h = span / n
        summ = summ + np.sum(func(a + h * (np.arange(n) + 0.5)))
        n *= 2
        row = [span * summ / n]
        for k in range(m):
            factor = 4.0 ** (k + 1)
            row.append((factor * row[k] - table[m - 1][k]) / (factor - 1.0))
        table.append(row)
        if abs(row[m] - table[m - 1][m - 1]) <= tol:
            return complex(row[m])
    raise QuadratureError(n, float(abs(table[-1][-1] - table[-2][-2])))


@lru_cache(maxsize=64)
def _series_coefficients(nu: complex, count: int) -> np.ndarray:
    """c_N of u^{nu+N} in e^{iu} J_nu(u), N < count."""
    inv_gamma = np.empty(count, dtype=complex)
    inv_gamma[0] = reciprocal_gamma(nu + 1)
    for j in range(1, count):
        inv_gamma[j] = inv_gamma[j - 1] / (nu + j)
    bessel = np.zeros(count, dtype=complex)
    for j in range((count + 1) // 2):
        bessel[2 * j] = (-1) ** j * 2.0 ** (-2 * j) * inv_gamma[j] / math.factorial(j)
    bessel *= 2.0 ** (-nu)
    exponential = np.array([1j ** k / math.factorial(k) for k in range(count)], dtype=complex)
    return np.convolve(bessel, exponential)[:count]


def fresnel_bessel_series(nu: complex, r, policy: SeriesPolicy = DEFAULT_POLICY):
    """
    Term-wise integral (1/2) sum_N c_N R^{nu+N+1} / (nu+N+1), R = r^2.

    Smooth in r, so it is the form the Bessel surface evaluates.
    """
    nu = complex(nu)
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise DomainError("r >= 0")
    if nu.real <= -1:
        raise DomainError("Re(nu) > -1 for an integrable endpoint at 0")
    big = float(np.max(r_arr) ** 2) if r_arr.size else 0.0

    count = 16
    while True:
        if count > policy.max_terms:
            raise ConvergenceError(policy.max_terms)
        coeffs = _series_coefficients(nu, count)
        tail = np.abs(coeffs[-4:]) * big ** np.arange(count - 4, count)
        head = np.max(np.abs(coeffs) * big ** np.arange(count)) if big > 0 else 1.0
        if big == 0 or (np.all(tail <= policy.cutoff * head) and count > big):
            break
        count *= 2

    R = r_arr * r_arr
    powers = nu + np.arange(count) + 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        log_r = np.log(np.where(R > 0, R, 1.0))[..., None]
        terms = coeffs / powers * np.exp(powers * log_r)
    out = 0.5 * np.sum(terms, axis=-1)
    out = np.where(R > 0, out, 0.0)
    if np.ndim(r) == 0:
        return complex(out)
    return out
