"""Exception types shared across the package."""


class RagdError(Exception):
    """Base class for all package-specific errors."""


class DomainError(RagdError, ValueError):
    """Input lies outside the mathematical domain of an operation."""


class InjectivityError(DomainError):
    """Tangent vector reaches past the injectivity radius of the manifold."""


class AntipodalError(DomainError):
    """Logarithm requested between (numerically) antipodal sphere points."""


class ConvergenceError(RagdError, RuntimeError):
    """An iterative routine failed to reach its tolerance."""


class NonFiniteError(RagdError, ArithmeticError):
    """A non-finite value appeared where a finite one is required."""


class MissingDataError(RagdError, ValueError):
    """A trace or problem lacks the fields needed by the requested analysis."""


class HypothesisError(RagdError, ValueError):
    """The hypotheses of the requested bound do not hold for these inputs."""


class RuntimeContainmentError(RagdError, RuntimeError):
    """An iterate left the region where the problem's constants are certified."""
