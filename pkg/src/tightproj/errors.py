"""Exception hierarchy.

Each class carries the CLI exit code it maps to, so the command layer never
needs its own lookup table.
"""


class TightProjError(Exception):
    exit_code = 2


class InvalidInputError(TightProjError, ValueError):
    """Malformed or out-of-domain input (non-finite entries, bad shapes, ...)."""


class ModelError(InvalidInputError):
    """A spectrum model whose declared data disagrees with its sequence."""


class ContractError(TightProjError):
    """An operation was called outside its precondition."""


class NotApplicableError(TightProjError):
    """The requested pathway does not apply to this input."""


class ConvergenceError(TightProjError, ArithmeticError):
    exit_code = 1

    def __init__(self, message, off_norm=None, sweeps=None):
        super().__init__(message)
        self.off_norm = off_norm
        self.sweeps = sweeps


class CertificateError(TightProjError):
    """A certificate failed where success was guaranteed."""

    exit_code = 1


class InfeasibleAlphaError(TightProjError):
    exit_code = 3


class ObstructionError(TightProjError):
    """A mathematical 'no': the requested projection cannot exist."""

    exit_code = 3


class PartitionExhaustedError(ObstructionError):
    pass


class InsufficientTruncationError(ObstructionError):
    pass
