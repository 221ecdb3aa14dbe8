"""Momentum-parameter recursion for the accelerated solvers.

Each accelerated step picks its momentum parameter ``xi_{t+1}`` as the
positive root of

    xi * (xi - a) / (1 - xi) = xi_t**2 / delta,

where ``a = 2 * mu * delta_gamma`` aggregates the strong-convexity gain of
one gradient step and ``delta >= 1`` is the distortion rate charged for
moving the reference point of the squared-distance term.  The root map is
a contraction toward a delta-dependent fixed point; the product of the
resulting ``(1 - xi_t)`` factors is the convergence rate of the method.

This module implements the root map, its fixed points, the contraction
estimate, and the predicted iteration count for ``xi_t`` to fall below
``sqrt(mu / L)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, DomainError

__all__ = [
    "XiParams",
    "next_xi",
    "iterate_xi",
    "xi_residual",
    "fixed_point_xi",
    "contraction_factor",
    "theta",
    "iterations_to_threshold",
]

# Slope constant of the derivative bound theta(v) < 1 - _C_THETA * v.
_C_THETA = 4.0 / (5.0 + math.sqrt(5.0))

# Largest representable value strictly below 1; roots are clamped into
# [a, _XI_SUP] to guard the open upper end of the domain against rounding.
_XI_SUP = math.nextafter(1.0, 0.0)

_RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class XiParams:
    """Coefficients of one recursion step.

    Attributes
    ----------
    a : float
        Gradient-step gain ``2 * mu * delta_gamma``.  Must lie in ``[0, 1)``;
        ``a = 0`` is the non-strongly-convex limit.
    delta : float
        Distortion rate, ``>= 1``.  ``math.inf`` is accepted and sends the
        recursion to its flat limit ``xi = a``.
    """

    a: float
    delta: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.a) or not 0.0 <= self.a < 1.0:
            raise DomainError(f"a must lie in [0, 1), got {self.a}")
        if math.isnan(self.delta) or self.delta < 1.0:
            raise DomainError(f"delta must be >= 1, got {self.delta}")


def next_xi(xi_t: float, params: XiParams) -> float:
    """Advance the recursion by one step.

    Returns the unique root in ``[a, 1)`` of
    ``xi * (xi - a) / (1 - xi) = xi_t**2 / delta``.  The conjugate form of
    the quadratic formula is used when the linear coefficient is positive,
    so no cancellation occurs for small ``a`` or large ``delta``.
    """
    if not math.isfinite(xi_t) or xi_t < 0.0:
        raise DomainError(f"xi_t must be finite and >= 0, got {xi_t}")
    a = params.a
    rhs = 0.0 if math.isinf(params.delta) else xi_t * xi_t / params.delta
    b = rhs - a
    disc = math.sqrt(b * b + 4.0 * rhs)
    if b > 0.0:
        nxt = 2.0 * rhs / (disc + b)
    else:
        nxt = 0.5 * (disc - b)
    nxt = min(max(nxt, a), _XI_SUP)
    res = xi_residual(nxt, xi_t, params)
    if abs(res) > _RESIDUAL_TOL * max(1.0, rhs):
        raise ConvergenceError(
            f"root of the xi recursion failed its residual check: {res:.3e}"
        )
    return nxt


def xi_residual(xi_next: float, xi_t: float, params: XiParams) -> float:
    """Defect of ``xi_next`` as a root of the recursion equation."""
    rhs = 0.0 if math.isinf(params.delta) else xi_t * xi_t / params.delta
    return xi_next * (xi_next - params.a) / (1.0 - xi_next) - rhs


def iterate_xi(xi0: float, params: XiParams, steps: int) -> list[float]:
    """Run the recursion for ``steps`` updates; returns ``[xi_0, ..., xi_steps]``."""
    if steps < 0:
        raise DomainError(f"steps must be >= 0, got {steps}")
    seq = [xi0]
    for _ in range(steps):
        seq.append(next_xi(seq[-1], params))
    return seq


def fixed_point_xi(params: XiParams) -> float:
    """Fixed point ``xi(delta)`` of the recursion at constant parameters.

    Closed form ``((delta - 1)**2 + 4 delta a)**0.5 - (delta - 1)) / 2``,
    evaluated in conjugate form for ``delta > 1``.  Special cases:
    ``xi(1) = sqrt(a)`` and ``xi(delta) -> a`` as ``delta -> inf``.
    """
    a, d = params.a, params.delta
    if math.isinf(d):
        return a
    if d == 1.0:
        return math.sqrt(a)
    b = d - 1.0
    disc = math.sqrt(b * b + 4.0 * d * a)
    return 2.0 * d * a / (disc + b)


def contraction_factor(params: XiParams) -> float:
    """Per-step contraction rate of ``|xi_t - xi(delta)|``.

    Returns ``(1 - _C_THETA * a / sqrt(delta)) / sqrt(delta)``, which is a
    valid Lipschitz bound of the update map around its fixed point.  The
    value is strictly below 1 unless ``a == 0`` and ``delta == 1``, in
    which case the recursion does not contract and DomainError is raised.
    """
    a, d = params.a, params.delta
    if math.isinf(d):
        return 0.0
    root_d = math.sqrt(d)
    factor = (1.0 - _C_THETA * a / root_d) / root_d
    if factor >= 1.0:
        raise DomainError("contraction requires a > 0 or delta > 1")
    return factor


def theta(v: float, a: float) -> float:
    """Derivative surrogate of the update map at ``delta = 1``.

    ``theta(v) = (v (v^2 - a) + 2 v) / sqrt((v^2 - a)^2 + 4 v^2) - v``
    satisfies ``0 <= theta(v) < 1 - _C_THETA * v`` on ``0 < v < 1``.
    """
    if not 0.0 < v < 1.0:
        raise DomainError(f"theta is certified on 0 < v < 1, got {v}")
    if not 0.0 <= a < 1.0:
        raise DomainError(f"a must lie in [0, 1), got {a}")
    q = v * v - a
    return (v * q + 2.0 * v) / math.sqrt(q * q + 4.0 * v * v) - v


def iterations_to_threshold(
    xi0: float, mu: float, L: float, delta_gamma: float
) -> int:
    """Upper bound on the first ``t`` with ``xi_t <= sqrt(mu / L)``.

    Uses the contraction of the flat (``delta = 1``) recursion toward
    ``sqrt(2 mu delta_gamma)``:

        n = log((xi0 - sqrt(a)) / (sqrt(mu/L) - sqrt(a))) / log(1 / lam)

    with ``lam = 1 - 2 * _C_THETA * mu * delta_gamma``.  Returns 0 when
    ``xi0`` already sits at or below the threshold.  Requires
    ``sqrt(2 mu delta_gamma) < sqrt(mu / L)``, i.e. ``gamma * L != 1``.
    """
    if mu <= 0.0 or L < mu:
        raise DomainError(f"need 0 < mu <= L, got mu={mu}, L={L}")
    if delta_gamma <= 0.0:
        raise DomainError(f"delta_gamma must be positive, got {delta_gamma}")
    if not 0.0 <= xi0 < 1.0:
        raise DomainError(f"xi0 must lie in [0, 1), got {xi0}")
    sqrt_q = math.sqrt(mu / L)
    if xi0 <= sqrt_q:
        return 0
    a = 2.0 * mu * delta_gamma
    sqrt_a = math.sqrt(a)
    if sqrt_a >= sqrt_q:
        raise DomainError(
            "threshold sqrt(mu/L) is unreachable: 2*mu*delta_gamma >= mu/L "
            "(gamma * L == 1 closes the gap)"
        )
    lam = 1.0 - 2.0 * _C_THETA * mu * delta_gamma
    n = math.log((xi0 - sqrt_a) / (sqrt_q - sqrt_a)) / -math.log(lam)
    return max(0, math.ceil(n))
