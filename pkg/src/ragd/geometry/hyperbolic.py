"""Hyperboloid model of hyperbolic space with curvature ``-kappa``.

Points live on the upper sheet of ``<x, x>_L = -1/kappa`` inside Minkowski
space ``R^{dim, 1}``; the last coordinate is the timelike one.  Logarithms
and distances are computed through the chordal direction

    u = (y - x) - (c - 1) x,      c = -kappa <x, y>_L,

which keeps small distances accurate to a few ulps instead of the
``sqrt(eps)`` floor of the plain ``arccosh`` formula.
"""

from __future__ import annotations

import math

import numpy as np

from .._scalars import acosh_ratio, sinch
from ..errors import DomainError, NonFiniteError
from .base import Manifold, ManifoldPoint, TangentVector

__all__ = ["Hyperbolic"]

_POINT_TOL = 1e-9
_TANGENT_TOL = 1e-8

# cosh overflows near 710 and membership checks square coordinates, so
# geodesic arguments are capped at half that.
_MAX_ARG = 352.0

# Above this magnitude of kappa * |x| * |y| the Minkowski form of a
# near-unit result is dominated by cancellation noise, so renormalizing
# by it would inject more error than the drift it removes.
_RENORM_SCALE = 1e6


class Hyperbolic(Manifold):
    """dim-dimensional hyperbolic space embedded in R^{dim+1}."""

    name = "hyperbolic"
    curv_upper = 0.0
    is_hadamard = True

    def __init__(self, dim: int, kappa: float = 1.0) -> None:
        if dim < 1:
            raise DomainError(f"dim must be >= 1, got {dim}")
        if not kappa > 0.0 or not math.isfinite(kappa):
            raise DomainError(f"kappa must be positive, got {kappa}")
        self.dim = int(dim)
        self.kappa = float(kappa)
        self.curv_lower_mag = float(kappa)

    def __repr__(self) -> str:
        return f"Hyperbolic(dim={self.dim}, kappa={self.kappa})"

    # ----- Minkowski helpers ------------------------------------------

    @staticmethod
    def _mdot(a: np.ndarray, b: np.ndarray) -> float:
        return float(np.dot(a[:-1], b[:-1]) - a[-1] * b[-1])

    def _scale_sq(self, a: np.ndarray, b: np.ndarray) -> float:
        """Magnitude scale of the cancellation inside ``_mdot(a, b)``."""
        return float(np.dot(np.abs(a), np.abs(b)))

    # ----- membership --------------------------------------------------

    def check_point(self, coords: np.ndarray) -> None:
        if coords.shape != (self.dim + 1,):
            raise DomainError(
                f"expected shape ({self.dim + 1},), got {coords.shape}"
            )
        if not np.all(np.isfinite(coords)):
            raise DomainError("coordinates must be finite")
        resid = self.kappa * self._mdot(coords, coords) + 1.0
        tol = _POINT_TOL * (1.0 + self.kappa * self._scale_sq(coords, coords))
        if abs(resid) > tol:
            raise DomainError(
                f"point is off the hyperboloid: constraint residual {resid:.3e}"
            )
        if coords[-1] <= 0.0:
            raise DomainError("point lies on the lower sheet")

    def check_tangent(self, x: ManifoldPoint, coords: np.ndarray) -> None:
        if coords.shape != x.coords.shape:
            raise DomainError(
                f"tangent shape {coords.shape} does not match point {x.coords.shape}"
            )
        if not np.all(np.isfinite(coords)):
            raise DomainError("coordinates must be finite")
        resid = self._mdot(x.coords, coords)
        tol = _TANGENT_TOL * (1.0 + self._scale_sq(x.coords, coords))
        if abs(resid) > tol:
            raise DomainError(
                f"vector is not tangent: <x, v>_L = {resid:.3e}"
            )

    def _project_point(self, coords: np.ndarray) -> ManifoldPoint:
        if not np.all(np.isfinite(coords)):
            raise NonFiniteError("projection target has non-finite coordinates")
        if self.kappa * self._scale_sq(coords, coords) > _RENORM_SCALE:
            return ManifoldPoint(coords)
        s = -self.kappa * self._mdot(coords, coords)
        if not s > 0.0:
            raise NonFiniteError("projection target left the timelike cone")
        return ManifoldPoint(coords / math.sqrt(s))

    def _project_tangent(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        return v + (self.kappa * self._mdot(x, v)) * x

    # ----- metric -------------------------------------------------------

    def inner(self, x: ManifoldPoint, u: TangentVector, v: TangentVector) -> float:
        self._require_base(x, u)
        self._require_base(x, v)
        return self._mdot(u.coords, v.coords)

    def exp(self, x: ManifoldPoint, v: TangentVector) -> ManifoldPoint:
        self._require_base(x, v)
        sq = max(self._mdot(v.coords, v.coords), 0.0)
        r = math.sqrt(sq)
        w = math.sqrt(self.kappa) * r
        if w > _MAX_ARG:
            raise DomainError(
                f"geodesic argument {w:.1f} exceeds the double-precision range"
            )
        y = math.cosh(w) * x.coords + sinch(w) * v.coords
        return self._project_point(y)

    def _chord(self, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float]:
        """Chordal direction u and ``c - 1`` for the pair (x, y)."""
        cm1 = max(-self.kappa * self._mdot(x, y) - 1.0, 0.0)
        u = (y - x) - cm1 * x
        return u, cm1

    def log(self, x: ManifoldPoint, y: ManifoldPoint) -> TangentVector:
        u, cm1 = self._chord(x.coords, y.coords)
        v = acosh_ratio(cm1) * u
        return TangentVector(x, self._project_tangent(x.coords, v))

    def distance(self, x: ManifoldPoint, y: ManifoldPoint) -> float:
        u, cm1 = self._chord(x.coords, y.coords)
        nrm = math.sqrt(max(self._mdot(u, u), 0.0))
        return acosh_ratio(cm1) * nrm

    # ----- sampling -------------------------------------------------------

    def base_point(self) -> ManifoldPoint:
        coords = np.zeros(self.dim + 1)
        coords[-1] = 1.0 / math.sqrt(self.kappa)
        return ManifoldPoint(coords)

    def random_tangent(
        self, rng: np.random.Generator, x: ManifoldPoint, scale: float = 1.0
    ) -> TangentVector:
        g = self._project_tangent(x.coords, rng.normal(size=self.dim + 1))
        nrm = math.sqrt(max(self._mdot(g, g), 0.0))
        if nrm < 1e-12:
            g = self._project_tangent(x.coords, np.ones(self.dim + 1))
            nrm = math.sqrt(max(self._mdot(g, g), 0.0))
        return TangentVector(x, (scale * rng.uniform() / nrm) * g)
