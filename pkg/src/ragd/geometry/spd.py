"""Symmetric positive definite matrices with the affine-invariant metric.

A Hadamard manifold; its sectional curvature lies in ``[-1/2, 0]`` after
the usual normalization, so the distortion bounds apply with
``kappa = 1/2`` (overridable).  All matrix functions go through symmetric
eigendecompositions.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConvergenceError, DomainError
from .base import Manifold, ManifoldPoint, TangentVector

__all__ = ["SPD"]

_SYM_TOL = 1e-12
_EIG_FLOOR = 1e-12


def _sym(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


class SPD(Manifold):
    """n x n symmetric positive definite matrices."""

    name = "spd"
    curv_upper = 0.0
    is_hadamard = True

    def __init__(self, n: int, kappa: float = 0.5) -> None:
        if n < 1:
            raise DomainError(f"n must be >= 1, got {n}")
        if not kappa >= 0.0 or not math.isfinite(kappa):
            raise DomainError(f"kappa must be >= 0, got {kappa}")
        self.n = int(n)
        self.dim = n * (n + 1) // 2
        self.kappa = float(kappa)
        self.curv_lower_mag = float(kappa)

    def __repr__(self) -> str:
        return f"SPD(n={self.n}, kappa={self.kappa})"

    # ----- linear algebra helpers ----------------------------------------

    @staticmethod
    def _eigh(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        try:
            return np.linalg.eigh(a)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"eigendecomposition failed: {exc}") from exc

    def _sqrt_pair(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Matrix square root of ``x`` and its inverse."""
        w, q = self._eigh(x)
        if w[0] <= 0.0:
            raise ConvergenceError("matrix square root of a non-PD input")
        root = np.sqrt(w)
        return (q * root) @ q.T, (q / root) @ q.T

    # ----- membership ------------------------------------------------------

    def _check_sym(self, coords: np.ndarray) -> None:
        if coords.shape != (self.n, self.n):
            raise DomainError(
                f"expected shape ({self.n}, {self.n}), got {coords.shape}"
            )
        if not np.all(np.isfinite(coords)):
            raise DomainError("coordinates must be finite")
        scale = 1.0 + float(np.max(np.abs(coords)))
        if float(np.max(np.abs(coords - coords.T))) > _SYM_TOL * scale:
            raise DomainError("matrix is not symmetric within tolerance")

    def check_point(self, coords: np.ndarray) -> None:
        self._check_sym(coords)
        w = np.linalg.eigvalsh(_sym(coords))
        if w[0] <= _EIG_FLOOR * max(1.0, w[-1]):
            raise DomainError(
                f"matrix is not positive definite beyond tolerance: "
                f"min eigenvalue {w[0]:.3e}"
            )

    def check_tangent(self, x: ManifoldPoint, coords: np.ndarray) -> None:
        self._check_sym(coords)

    # ----- metric -----------------------------------------------------------

    def inner(self, x: ManifoldPoint, u: TangentVector, v: TangentVector) -> float:
        self._require_base(x, u)
        self._require_base(x, v)
        _, isqrt = self._sqrt_pair(x.coords)
        a = isqrt @ u.coords @ isqrt
        b = isqrt @ v.coords @ isqrt
        return float(np.sum(a * b))

    def exp(self, x: ManifoldPoint, v: TangentVector) -> ManifoldPoint:
        self._require_base(x, v)
        root, isqrt = self._sqrt_pair(x.coords)
        s = _sym(isqrt @ v.coords @ isqrt)
        w, q = self._eigh(s)
        if w[-1] > 700.0:
            raise DomainError(
                f"geodesic argument {w[-1]:.1f} exceeds the double-precision range"
            )
        e = (q * np.exp(w)) @ q.T
        return ManifoldPoint(_sym(root @ e @ root))

    def log(self, x: ManifoldPoint, y: ManifoldPoint) -> TangentVector:
        root, isqrt = self._sqrt_pair(x.coords)
        s = _sym(isqrt @ y.coords @ isqrt)
        w, q = self._eigh(s)
        if w[0] <= 0.0:
            raise ConvergenceError("logarithm of a non-PD midpoint matrix")
        lg = (q * np.log(w)) @ q.T
        return TangentVector(x, _sym(root @ lg @ root))

    def distance(self, x: ManifoldPoint, y: ManifoldPoint) -> float:
        _, isqrt = self._sqrt_pair(x.coords)
        s = _sym(isqrt @ y.coords @ isqrt)
        w = np.linalg.eigvalsh(s)
        if w[0] <= 0.0:
            raise ConvergenceError("distance to a non-PD midpoint matrix")
        return float(np.linalg.norm(np.log(w)))

    # ----- sampling -----------------------------------------------------------

    def base_point(self) -> ManifoldPoint:
        return ManifoldPoint(np.eye(self.n))

    def random_tangent(
        self, rng: np.random.Generator, x: ManifoldPoint, scale: float = 1.0
    ) -> TangentVector:
        g = _sym(rng.normal(size=(self.n, self.n)))
        nrm = math.sqrt(max(self.inner(x, TangentVector(x, g), TangentVector(x, g)), 0.0))
        if nrm < 1e-12:
            g = np.eye(self.n)
            nrm = math.sqrt(self.inner(x, TangentVector(x, g), TangentVector(x, g)))
        return TangentVector(x, (scale * rng.uniform() / nrm) * g)
