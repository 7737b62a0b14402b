#!/usr/bin/env python3
"""
CHART GRIDS

Uniform and seeded random samples of a coordinate box that keep a margin
from the box faces and from every singular locus.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Mapping, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_GRID, DEFAULT_SEED
from .errors import DomainError, SamplingError

logger = logging.getLogger(__name__)

Box = Tuple[Tuple[float, float], ...]
Clearance = Callable[[np.ndarray, Mapping[str, float]], np.ndarray]


class SamplingMode(Enum):
    UNIFORM = "uniform"
    RANDOM = "random"


@dataclass(frozen=True)
class GridSpec:
    """How many chart points to draw and how far to keep from the boundary"""
    count: int = DEFAULT_GRID
    mode: SamplingMode = SamplingMode.RANDOM
    seed: int = DEFAULT_SEED
    margin: float = 0.05

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f"grid count must be positive, got {self.count}")
        if self.margin < 0:
            raise ValueError(f"grid margin must be non-negative, got {self.margin}")
        if isinstance(self.mode, str):
            object.__setattr__(self, "mode", SamplingMode(self.mode))

    def to_dict(self) -> dict:
        return {"count": self.count, "mode": self.mode.value, "seed": self.seed, "margin": self.margin}

    @classmethod
    def from_dict(cls, data: Mapping) -> "GridSpec":
        return cls(
            count=int(data.get("count", DEFAULT_GRID)),
            mode=SamplingMode(data.get("mode", SamplingMode.RANDOM.value)),
            seed=int(data.get("seed", DEFAULT_SEED)),
            margin=float(data.get("margin", 0.05)),
        )


@dataclass(frozen=True)
class SingularLocus:
    """A set the chart must avoid; clearance(P) > margin means the point is safe"""
    name: str
    clearance: Clearance


def box_violation(box: Box, P: np.ndarray, margin: float) -> np.ndarray:
    """Per-point boolean: outside the box shrunk by margin."""
    lo = np.array([b[0] for b in box]) + margin
    hi = np.array([b[1] for b in box]) - margin
    return np.any((P < lo) | (P > hi), axis=-1)


def check_point(box: Box, singular: Sequence[SingularLocus], params: Mapping[str, float],
                p: np.ndarray, margin: float):
    """Raise DomainError naming the first violated predicate."""
    p = np.asarray(p, dtype=float)
    if p.shape != (len(box),):
        raise DomainError(f"chart point must have {len(box)} coordinates", p)
    if box_violation(box, p[None, :], margin)[0]:
        raise DomainError(f"inside the coordinate box {list(box)} by {margin:g}", p)
    for locus in singular:
        if locus.clearance(p[None, :], params)[0] <= margin:
            raise DomainError(f"{locus.name} (clearance > {margin:g})", p)


def feasible(box: Box, singular: Sequence[SingularLocus], params: Mapping[str, float],
             P: np.ndarray, margin: float) -> np.ndarray:
    ok = ~box_violation(box, P, margin)
    for locus in singular:
        ok &= locus.clearance(P, params) > margin
    return ok


def sample_box(box: Box, singular: Sequence[SingularLocus], params: Mapping[str, float],
               grid: GridSpec, margin: Optional[float] = None) -> np.ndarray:
    """
    Chart points respecting every predicate with the grid margin.

    Uniform mode uses a tensor grid with ceil(count^(1/n)) points per axis
    and keeps the first `count` feasible points; random mode draws from
    numpy's default_rng(seed) until `count` feasible points are found.

    Raises:
        SamplingError: no feasible point exists under the margin
    """
    margin = grid.margin if margin is None else margin
    n = len(box)
    lo = np.array([b[0] for b in box]) + margin
    hi = np.array([b[1] for b in box]) - margin
    if np.any(hi <= lo):
        raise SamplingError(f"box {list(box)} is empty under margin {margin:g}")

    if grid.mode is SamplingMode.UNIFORM:
        per_axis = max(2, int(np.ceil(grid.count ** (1.0 / n))))
        axes = [np.linspace(l, h, per_axis) for l, h in zip(lo, hi)]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
        points = mesh[feasible(box, singular, params, mesh, margin)][:grid.count]
    else:
        rng = np.random.default_rng(grid.seed)
        chunks, found = [], 0
        for _ in range(50):
            draw = rng.uniform(lo, hi, size=(max(grid.count, 16) * 2, n))
            keep = draw[feasible(box, singular, params, draw, margin)]
            chunks.append(keep)
            found += keep.shape[0]
            if found >= grid.count:
                break
        points = np.vstack(chunks)[:grid.count] if chunks else np.empty((0, n))

    if points.shape[0] == 0:
        raise SamplingError(f"no feasible chart points in {list(box)} with margin {margin:g}")
    if points.shape[0] < grid.count:
        logger.debug("only %d of %d requested points are feasible", points.shape[0], grid.count)
    return points
