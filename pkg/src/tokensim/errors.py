"""Exception types raised across the simulator."""


class TokensimError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateState(TokensimError):
    """A state variable that must stay positive would be used at or below zero."""


class NonFiniteValue(TokensimError):
    """A computed state field came out NaN or infinite."""


class InvalidMean(TokensimError):
    """A Poisson mean was negative or non-finite."""


class NoTransactedService(TokensimError):
    """Revenue ratio requested with zero transacted quantity."""


class DegenerateBaseline(TokensimError):
    """Growth ratio requested against a zero starting quantity."""


class InsufficientData(TokensimError):
    """Not enough runs, or zero variance, for a correlation estimate."""


class ShapeMismatch(TokensimError):
    """Trajectories in an ensemble have unequal lengths."""


class ParseError(TokensimError):
    """Configuration file could not be parsed."""


class ValidationError(TokensimError):
    """Configuration value violates a constraint; message names the field."""


class SchemaMismatch(TokensimError):
    """Two output directories have incompatible manifests."""


class SimulationError(TokensimError):
    """A step failed; carries the run and timestep where it happened."""

    def __init__(self, run_index: int, t: int, message: str):
        super().__init__(f"run {run_index}, t={t}: {message}")
        self.run_index = run_index
        self.t = t
        self.message = message

    def __reduce__(self):  # keeps the error picklable across process pools
        return (SimulationError, (self.run_index, self.t, self.message))
