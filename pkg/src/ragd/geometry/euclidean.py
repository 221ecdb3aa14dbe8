"""Flat space; exponential and logarithm reduce to vector arithmetic."""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from .base import Manifold, ManifoldPoint, TangentVector

__all__ = ["Euclidean"]


class Euclidean(Manifold):
    """R^dim with the standard inner product."""

    name = "euclidean"
    curv_lower_mag = 0.0
    curv_upper = 0.0
    is_hadamard = True

    def __init__(self, dim: int) -> None:
        if dim < 1:
            raise DomainError(f"dim must be >= 1, got {dim}")
        self.dim = int(dim)

    def __repr__(self) -> str:
        return f"Euclidean(dim={self.dim})"

    def check_point(self, coords: np.ndarray) -> None:
        if coords.shape != (self.dim,):
            raise DomainError(
                f"expected shape ({self.dim},), got {coords.shape}"
            )
        if not np.all(np.isfinite(coords)):
            raise DomainError("coordinates must be finite")

    def check_tangent(self, x: ManifoldPoint, coords: np.ndarray) -> None:
        if coords.shape != x.coords.shape:
            raise DomainError(
                f"tangent shape {coords.shape} does not match point {x.coords.shape}"
            )
        if not np.all(np.isfinite(coords)):
            raise DomainError("coordinates must be finite")

    def exp(self, x: ManifoldPoint, v: TangentVector) -> ManifoldPoint:
        self._require_base(x, v)
        return ManifoldPoint(x.coords + v.coords)

    def log(self, x: ManifoldPoint, y: ManifoldPoint) -> TangentVector:
        return TangentVector(x, y.coords - x.coords)

    def distance(self, x: ManifoldPoint, y: ManifoldPoint) -> float:
        return float(np.linalg.norm(y.coords - x.coords))

    def inner(self, x: ManifoldPoint, u: TangentVector, v: TangentVector) -> float:
        self._require_base(x, u)
        self._require_base(x, v)
        return float(np.dot(u.coords, v.coords))

    def base_point(self) -> ManifoldPoint:
        return ManifoldPoint(np.zeros(self.dim))

    def random_tangent(
        self, rng: np.random.Generator, x: ManifoldPoint, scale: float = 1.0
    ) -> TangentVector:
        g = rng.normal(size=self.dim)
        nrm = np.linalg.norm(g)
        if nrm == 0.0:
            g = np.ones(self.dim)
            nrm = np.linalg.norm(g)
        return TangentVector(x, (scale * rng.uniform() / nrm) * g)
