"""Exception hierarchy shared by the analytic and oracle modules."""


class ECSError(Exception):
    """Base class for all errors raised by :mod:`ecsgen`."""


class DomainError(ECSError, ValueError):
    """An argument lies outside the domain of a formula (negative time, non-positive rate)."""


class DegenerateStateError(DomainError):
    """The requested measurement branch has zero norm, so the conditional state does not exist."""


class DegenerateModeError(DomainError):
    """The two coherent labels of one mode coincide; the qubit encoding of that mode is undefined."""


class LosslessRegimeError(DomainError):
    """A lossy formula was called with ``kappa <= 0``; use the lossless closed forms instead."""


class DensityValidationError(ECSError, ValueError):
    """A matrix fails the Hermitian / unit-trace / positive-semidefinite checks."""


class ZeroProbabilityError(ECSError):
    """A projective measurement outcome has (numerically) zero probability."""


class TruncationError(ECSError):
    """A Fock-space cutoff is too small for the state being represented."""
