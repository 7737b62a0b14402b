#!/usr/bin/env python3
"""
AMBIENT SPACE FORMS

Complex Euclidean space, the unit sphere lifting CP^n(4) and the anti-de Sitter
quadric lifting CH^n(-4), all realised in C^m with a signature-aware Hermitian
form.

This module:
1. Fixes the Hermitian inner product <u,v> = sum_a s_a u_a conj(v_a)
2. Fixes the Kaehler form omega(u,v) = -Im<u,v>
3. Measures quadric, contact-normality and isotropy residuals of lifts
4. Projects vectors onto the horizontal space of the Hopf fibration
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Tuple

import numpy as np

from .errors import DimensionError, UnsupportedModelError

logger = logging.getLogger(__name__)


class ModelKind(Enum):
    """Which complex space form an ambient model represents"""
    FLAT = "flat"
    SPHERICAL = "spherical-lift"
    HYPERBOLIC = "hyperbolic-lift"


@dataclass(frozen=True)
class Signature:
    """One sign per complex coordinate; -1 only on the first hyperbolic slot"""
    signs: Tuple[int, ...]

    def __post_init__(self):
        if len(self.signs) < 1:
            raise DimensionError("signature needs at least one coordinate")
        if any(s not in (-1, 1) for s in self.signs):
            raise DimensionError(f"signature entries must be +1 or -1, got {self.signs}")

    def __len__(self):
        return len(self.signs)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.signs, dtype=float)

    @classmethod
    def euclidean(cls, m: int) -> "Signature":
        return cls((1,) * m)

    @classmethod
    def lorentzian(cls, m: int) -> "Signature":
        return cls((-1,) + (1,) * (m - 1))


@dataclass(frozen=True)
class CVector:
    """A point or vector of C^m together with its signature"""
    entries: np.ndarray
    signature: Signature

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex).reshape(-1)
        if entries.shape[0] != len(self.signature):
            raise DimensionError(
                f"vector has {entries.shape[0]} entries but signature has {len(self.signature)}"
            )
        object.__setattr__(self, "entries", entries)

    def __len__(self):
        return self.entries.shape[0]

    def scaled(self, factor: complex) -> "CVector":
        return CVector(factor * self.entries, self.signature)


@dataclass(frozen=True)
class AmbientModel:
    """
    Ambient model of a complex space form M(4*epsilon).

    1. flat: C^n itself, m = n, epsilon = 0
    2. spherical-lift: S^{2n+1}(1) in C^{n+1}, epsilon = +1
    3. hyperbolic-lift: H_1^{2n+1}(-1) in C_1^{n+1}, epsilon = -1
    """
    kind: ModelKind
    n: int
    m: int = field(init=False)
    epsilon: int = field(init=False)
    signature: Signature = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError(f"intrinsic dimension must be positive, got {self.n}")
        if self.kind is ModelKind.FLAT:
            m, eps, sig = self.n, 0, Signature.euclidean(self.n)
        elif self.kind is ModelKind.SPHERICAL:
            m, eps, sig = self.n + 1, 1, Signature.euclidean(self.n + 1)
        else:
            m, eps, sig = self.n + 1, -1, Signature.lorentzian(self.n + 1)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "signature", sig)

    @classmethod
    def flat(cls, n: int) -> "AmbientModel":
        return cls(ModelKind.FLAT, n)

    @classmethod
    def spherical(cls, n: int) -> "AmbientModel":
        return cls(ModelKind.SPHERICAL, n)

    @classmethod
    def hyperbolic(cls, n: int) -> "AmbientModel":
        return cls(ModelKind.HYPERBOLIC, n)

    @property
    def is_lift(self) -> bool:
        return self.kind is not ModelKind.FLAT

    @property
    def quadric_level(self) -> float:
        """<z,z> on the quadric: +1 on the sphere, -1 on anti-de Sitter space."""
        if not self.is_lift:
            raise UnsupportedModelError("flat ambient has no quadric")
        return float(self.epsilon)

    @property
    def signs(self) -> np.ndarray:
        return self.signature.array

    @property
    def holomorphic_curvature(self) -> float:
        return 4.0 * self.epsilon

    def label(self) -> str:
        return {ModelKind.FLAT: "C", ModelKind.SPHERICAL: "CP", ModelKind.HYPERBOLIC: "CH"}[self.kind] + str(self.n)


# =============================================================================
# ARRAY-LEVEL ALGEBRA
# =============================================================================

def inner(u: np.ndarray, v: np.ndarray, signs: np.ndarray) -> complex:
    """Signed Hermitian product of raw coordinate arrays (last axis is C^m)."""
    return np.sum(signs * u * np.conj(v), axis=-1)


def omega(u: np.ndarray, v: np.ndarray, signs: np.ndarray) -> float:
    """Kaehler form omega(u,v) = Re<iu,v> = -Im<u,v>."""
    return -np.imag(inner(u, v, signs))


def project_horizontal(v: np.ndarray, z: np.ndarray, signs: np.ndarray) -> np.ndarray:
    """Remove the z and iz components along the last axis of v; <z,z> = +-1 fixes the divisor sign."""
    coefficient = np.asarray(inner(v, z, signs) / inner(z, z, signs).real)
    return v - coefficient[..., None] * z


def _check_pair(u: CVector, v: CVector):
    if len(u) != len(v):
        raise DimensionError(f"length mismatch: {len(u)} vs {len(v)}")
    if u.signature != v.signature:
        raise DimensionError(f"signature mismatch: {u.signature.signs} vs {v.signature.signs}")


def _check_model(z: CVector, model: AmbientModel):
    if len(z) != model.m:
        raise DimensionError(f"vector length {len(z)} does not match ambient dimension {model.m}")


# =============================================================================
# PUBLIC OPERATIONS
# =============================================================================

def herm_inner(u: CVector, v: CVector) -> complex:
    """Hermitian product <u,v>; its real part is the ambient metric."""
    _check_pair(u, v)
    return complex(inner(u.entries, v.entries, u.signature.array))


def kaehler_form(u: CVector, v: CVector) -> float:
    _check_pair(u, v)
    return float(omega(u.entries, v.entries, u.signature.array))


def quadric_residual(z: CVector, model: AmbientModel) -> float:
    """|<z,z> - sigma| with sigma = +1 on the sphere and -1 on the AdS quadric."""
    if not model.is_lift:
        raise UnsupportedModelError("quadric residual is undefined in the flat model")
    _check_model(z, model)
    return abs(herm_inner(z, z).real - model.quadric_level)


def legendrian_residuals(z: CVector, tangents: Sequence[CVector], model: AmbientModel) -> Tuple[float, float]:
    """
    Contact-normality and isotropy residuals of a lift.

    Returns:
        (max_j |Re<iz, d_j>|, max_{j,k} |Im<d_j, d_k>|)
    """
    _check_model(z, model)
    for t in tangents:
        _check_pair(z, t)
    signs = model.signs
    iz = 1j * z.entries
    contact = max((abs(inner(iz, t.entries, signs).real) for t in tangents), default=0.0)
    isotropy = 0.0
    for j, tj in enumerate(tangents):
        for tk in tangents[j + 1:]:
            isotropy = max(isotropy, abs(inner(tj.entries, tk.entries, signs).imag))
    return float(contact), float(isotropy)


def horizontal_project(v: CVector, z: CVector, model: AmbientModel) -> CVector:
    """Horizontal part of v at z: orthogonal to both z and iz."""
    if not model.is_lift:
        raise UnsupportedModelError("horizontal projection needs a lift model")
    _check_model(z, model)
    _check_pair(v, z)
    return CVector(project_horizontal(v.entries, z.entries, model.signs), v.signature)
