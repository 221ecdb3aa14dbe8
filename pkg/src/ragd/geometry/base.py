"""Point and tangent containers plus the manifold interface."""

from __future__ import annotations

import abc
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..errors import DomainError, NonFiniteError

__all__ = ["ManifoldPoint", "TangentVector", "Manifold"]


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class ManifoldPoint:
    """Immutable coordinate container for a point on a manifold."""

    coords: np.ndarray

    def __post_init__(self) -> None:
        arr = _freeze(self.coords)
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError("point coordinates must be finite")
        object.__setattr__(self, "coords", arr)


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Tangent vector anchored at a base point.

    Supports the linear operations used by the solvers; operands must share
    the same base point.
    """

    base: ManifoldPoint
    coords: np.ndarray

    def __post_init__(self) -> None:
        arr = _freeze(self.coords)
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError("tangent coordinates must be finite")
        if arr.shape != self.base.coords.shape:
            raise DomainError(
                f"tangent shape {arr.shape} does not match base {self.base.coords.shape}"
            )
        object.__setattr__(self, "coords", arr)

    def _require_same_base(self, other: "TangentVector") -> None:
        if self.base is not other.base and not np.array_equal(
            self.base.coords, other.base.coords
        ):
            raise DomainError("tangent vectors live at different base points")

    def __add__(self, other: "TangentVector") -> "TangentVector":
        self._require_same_base(other)
        return TangentVector(self.base, self.coords + other.coords)

    def __sub__(self, other: "TangentVector") -> "TangentVector":
        self._require_same_base(other)
        return TangentVector(self.base, self.coords - other.coords)

    def __neg__(self) -> "TangentVector":
        return TangentVector(self.base, -self.coords)

    def __mul__(self, scalar: float) -> "TangentVector":
        return TangentVector(self.base, float(scalar) * self.coords)

    __rmul__ = __mul__


class Manifold(abc.ABC):
    """Riemannian manifold with closed-form exponential and logarithm maps.

    Concrete manifolds advertise the curvature data consumed by the
    distortion module: ``curv_lower_mag`` is ``kappa >= 0`` such that the
    sectional curvature is ``>= -kappa``, ``curv_upper`` is an upper bound
    (positive only on the sphere), and ``is_hadamard`` states whether
    geodesics are globally unique.
    """

    name: str = "manifold"
    dim: int = 0
    curv_lower_mag: float = 0.0
    curv_upper: float = 0.0
    is_hadamard: bool = True

    # ----- membership ------------------------------------------------

    @abc.abstractmethod
    def check_point(self, coords: np.ndarray) -> None:
        """Raise DomainError if the coordinates do not describe a point."""

    @abc.abstractmethod
    def check_tangent(self, x: ManifoldPoint, coords: np.ndarray) -> None:
        """Raise DomainError if the coordinates are not tangent at ``x``."""

    def point(self, coords: Iterable[float]) -> ManifoldPoint:
        arr = np.asarray(coords, dtype=float)
        self.check_point(arr)
        return ManifoldPoint(arr)

    def tangent(self, x: ManifoldPoint, coords: Iterable[float]) -> TangentVector:
        arr = np.asarray(coords, dtype=float)
        self.check_tangent(x, arr)
        return TangentVector(x, arr)

    def zero_tangent(self, x: ManifoldPoint) -> TangentVector:
        return TangentVector(x, np.zeros_like(x.coords))

    def _require_base(self, x: ManifoldPoint, v: TangentVector) -> None:
        if v.base is not x and not np.array_equal(v.base.coords, x.coords):
            raise DomainError("tangent vector is anchored at a different point")

    # ----- metric ----------------------------------------------------

    @abc.abstractmethod
    def exp(self, x: ManifoldPoint, v: TangentVector) -> ManifoldPoint:
        """Geodesic endpoint ``exp_x(v)``."""

    @abc.abstractmethod
    def log(self, x: ManifoldPoint, y: ManifoldPoint) -> TangentVector:
        """Initial velocity of the geodesic from ``x`` to ``y``."""

    @abc.abstractmethod
    def distance(self, x: ManifoldPoint, y: ManifoldPoint) -> float:
        """Geodesic distance; equals ``norm(x, log(x, y))``."""

    @abc.abstractmethod
    def inner(self, x: ManifoldPoint, u: TangentVector, v: TangentVector) -> float:
        """Riemannian inner product at ``x``."""

    def norm(self, x: ManifoldPoint, v: TangentVector) -> float:
        return float(np.sqrt(max(self.inner(x, v, v), 0.0)))

    def projected_distance(
        self, x: ManifoldPoint, y: ManifoldPoint, z: ManifoldPoint
    ) -> float:
        """Distance between ``y`` and ``z`` seen from the tangent space at ``x``.

        ``|| log_x(y) - log_x(z) ||_x``; coincides with ``distance(y, z)``
        in the flat case and is the quantity the potential function tracks.
        """
        diff = self.log(x, y) - self.log(x, z)
        return self.norm(x, diff)

    # ----- sampling ---------------------------------------------------

    @abc.abstractmethod
    def base_point(self) -> ManifoldPoint:
        """A canonical point used as the default center for sampling."""

    @abc.abstractmethod
    def random_tangent(
        self, rng: np.random.Generator, x: ManifoldPoint, scale: float = 1.0
    ) -> TangentVector:
        """Tangent vector with independent Gaussian components, rescaled so
        its norm is uniform on ``(0, scale]``."""

    def random_point(
        self,
        rng: np.random.Generator,
        center: ManifoldPoint | None = None,
        radius: float = 1.0,
    ) -> ManifoldPoint:
        """Point at uniform random distance in ``(0, radius]`` from ``center``."""
        if center is None:
            center = self.base_point()
        return self.exp(center, self.random_tangent(rng, center, radius))
