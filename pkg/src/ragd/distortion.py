"""Curvature-dependent distortion rates for projected distances.

On a manifold whose sectional curvature is bounded below by ``-kappa``,
moving the base point of a projected squared distance from ``x`` to a
point at distance ``r`` inflates it by at most a computable factor.  This
module provides the three nested factors

    s_kappa(r) <= ... ,  t_kappa_hat(r) <= t_kappa(r),

together with the law-of-cosines coefficient ``trig_coeff`` they are built
from, and the combined rates used by the solver on Hadamard manifolds and
on the sphere.  All functions reduce to 1 at ``r = 0`` or ``kappa = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ._scalars import coth_ratio as _coth_ratio
from ._scalars import sinch as _sinch
from .errors import DomainError

__all__ = [
    "DistortionRate",
    "s_kappa",
    "trig_coeff",
    "t_kappa",
    "t_kappa_hat",
    "valid_rate_rauch",
    "valid_rate_hadamard",
    "valid_rate_nonhadamard",
]

_SOURCES = ("rauch_S", "improved_T", "epsilon_opt_That", "nonhadamard", "constant")


@dataclass(frozen=True)
class DistortionRate:
    """A certified distortion factor and the bound that produced it."""

    value: float
    source: str

    def __post_init__(self) -> None:
        if self.source not in _SOURCES:
            raise DomainError(f"unknown rate source {self.source!r}")
        if math.isnan(self.value) or self.value < 1.0:
            raise DomainError(f"distortion rate must be >= 1, got {self.value}")


def _check_args(kappa: float, r: float) -> None:
    if math.isnan(kappa) or kappa < 0.0:
        raise DomainError(f"curvature bound kappa must be >= 0, got {kappa}")
    if math.isnan(r) or r < 0.0:
        raise DomainError(f"distance must be >= 0, got {r}")


def s_kappa(kappa: float, r: float) -> float:
    """Squared Rauch expansion factor ``(sinh(sqrt(kappa) r) / (sqrt(kappa) r))**2``."""
    _check_args(kappa, r)
    if math.isinf(r):
        return math.inf
    return _sinch(math.sqrt(kappa) * r) ** 2


def trig_coeff(kappa: float, c: float) -> float:
    """Law-of-cosines coefficient ``sqrt(kappa) c / tanh(sqrt(kappa) c)``.

    For a geodesic triangle with side lengths ``a`` (opposite the vertex
    ``x``), ``b``, ``c`` and angle ``A`` at ``x``, curvature bounded below
    by ``-kappa`` gives ``a**2 <= trig_coeff(kappa, c) * b**2 + c**2
    - 2 b c cos(A)``.
    """
    _check_args(kappa, c)
    if math.isinf(c):
        return math.inf
    return _coth_ratio(math.sqrt(kappa) * c)


def t_kappa(kappa: float, r: float) -> float:
    """Improved distortion factor.

    ``max(1 + 4 (sqrt(k) r / tanh(sqrt(k) r) - 1), (sinh(2 sqrt(k) r) /
    (2 sqrt(k) r))**2)``; tighter than ``s_kappa`` applied to the worst
    pair distance, and quadratically close to 1 near ``r = 0``.
    """
    _check_args(kappa, r)
    if math.isinf(r):
        return math.inf
    w = math.sqrt(kappa) * r
    first = 1.0 + 4.0 * (_coth_ratio(w) - 1.0)
    if 2.0 * w > 350.0:
        # sinh overflows around 710; the second branch already dominates.
        return math.inf
    return max(first, _sinch(2.0 * w) ** 2)


def _t_hat_objective(eps: float, w: float) -> float:
    stretch = 1.0 + eps
    first = 1.0 + (1.0 + 1.0 / eps) ** 2 * (_coth_ratio(w) - 1.0)
    if stretch * w > 350.0:
        return math.inf
    second = _sinch(stretch * w) ** 2
    return max(first, second)


def t_kappa_hat(kappa: float, r: float) -> float:
    """Sharpened distortion factor, minimized over the free split ``eps > 0``.

    ``min_eps max(1 + (1 + 1/eps)**2 (coth term - 1), (sinh((1+eps) w) /
    ((1+eps) w))**2)``.  Choosing ``eps = 1`` recovers ``t_kappa``, so the
    result never exceeds it.  The objective is the maximum of a decreasing
    and an increasing function of ``eps``, hence unimodal; a log-spaced
    grid followed by golden-section refinement locates the crossing.
    """
    _check_args(kappa, r)
    w = math.sqrt(kappa) * r
    if w == 0.0:
        return 1.0
    if math.isinf(r):
        return math.inf
    grid = np.logspace(-3.0, 1.0, 200)
    values = [_t_hat_objective(e, w) for e in grid]
    i = int(np.argmin(values))
    best = values[i]
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    if math.isfinite(best) and lo < hi:
        res = minimize_scalar(
            _t_hat_objective, args=(w,), bounds=(lo, hi), method="bounded",
            options={"xatol": 1e-12},
        )
        if res.fun < best:
            best = float(res.fun)
    return min(best, _t_hat_objective(1.0, w))


def valid_rate_rauch(kappa: float, d_xz: float) -> DistortionRate:
    """Distortion rate from the plain Rauch bound, ``s_kappa(d(x, z))``."""
    if d_xz == 0.0 or kappa == 0.0:
        return DistortionRate(1.0, "rauch_S")
    return DistortionRate(s_kappa(kappa, d_xz), "rauch_S")


def valid_rate_hadamard(
    kappa: float, d_xz: float, sharp: bool = False
) -> DistortionRate:
    """Distortion rate for one solver step on a Hadamard manifold.

    Uses the improved factor ``t_kappa`` of the distance between the
    current iterate and the mirror point, or its sharpened variant when
    ``sharp`` is set.
    """
    if d_xz == 0.0 or kappa == 0.0:
        return DistortionRate(1.0, "epsilon_opt_That" if sharp else "improved_T")
    if sharp:
        return DistortionRate(t_kappa_hat(kappa, d_xz), "epsilon_opt_That")
    return DistortionRate(t_kappa(kappa, d_xz), "improved_T")


def valid_rate_nonhadamard(
    kappa: float, d_xz: float, d_yz: float
) -> DistortionRate:
    """Distortion rate when positive curvature is present.

    Combines the lower-bound factor with the projection penalty of
    positive curvature: ``t_kappa(d(x, z)) * (1 + 2 d(y, z)**2)``.
    """
    if math.isnan(d_yz) or d_yz < 0.0:
        raise DomainError(f"distance must be >= 0, got {d_yz}")
    base = 1.0 if (d_xz == 0.0 or kappa == 0.0) else t_kappa(kappa, d_xz)
    return DistortionRate(base * (1.0 + 2.0 * d_yz * d_yz), "nonhadamard")
