"""Manifolds with closed-form geodesic maps."""

from .base import Manifold, ManifoldPoint, TangentVector
from .euclidean import Euclidean
from .hyperbolic import Hyperbolic
from .spd import SPD
from .sphere import Sphere

__all__ = [
    "Manifold",
    "ManifoldPoint",
    "TangentVector",
    "Euclidean",
    "Hyperbolic",
    "Sphere",
    "SPD",
]
