"""Exception taxonomy shared across the solver and simulator."""


class CoinvestError(Exception):
    """Base class for every error this package raises on purpose."""


class ParameterError(CoinvestError, ValueError):
    """Model parameters violate a structural requirement."""


class DomainError(CoinvestError, ValueError):
    """A state argument lies outside the process domain (0, inf)."""


class NumericalError(CoinvestError, RuntimeError):
    """A numerical routine failed, e.g. no sign change in a scanned bracket."""


class NoRootError(NumericalError):
    """A bracketed root does not exist for the given inputs."""


class NoSolutionError(CoinvestError):
    """The requested policy or equilibrium does not exist for these inputs."""


class SymmetricDegenerateError(NoSolutionError):
    """Costs are not strictly ordered, so the asymmetric construction degenerates."""


class ConditionFailed(NoSolutionError):
    """A named equilibrium condition failed; ``condition`` says which one."""

    def __init__(self, condition, message=""):
        super().__init__(message or condition)
        self.condition = condition


class InternalError(CoinvestError, RuntimeError):
    """An internal construction invariant was violated."""


class ConfigError(CoinvestError, ValueError):
    """Simulation or CLI configuration is invalid."""
