"""Accelerated first-order optimization on Riemannian manifolds.

Implements a globally accelerated Riemannian gradient method together with
the machinery needed to certify it at runtime: metric-distortion rates, the
momentum recursion and its convergence theory, potential-function
bookkeeping, benchmark problem generators, and a deterministic benchmark
CLI (``ragd``).
"""

from .errors import (
    AntipodalError,
    ConvergenceError,
    DomainError,
    HypothesisError,
    InjectivityError,
    MissingDataError,
    NonFiniteError,
    RagdError,
    RuntimeContainmentError,
)
from .geometry import SPD, Euclidean, Hyperbolic, Manifold, ManifoldPoint, Sphere, TangentVector

__version__ = "0.1.0"
