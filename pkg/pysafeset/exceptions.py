from typing import List


class PySafeSetError(Exception):
    """
    Base exception for pysafeset. All errors raised deliberately by the synthesis pipeline derive from it.
    """

    def __init__(self, message: str = "", cause=None):
        """
        Initializes a new PySafeSetError.

        Args:
            message: The message accompanying this exception.
            cause: The underlying cause of this exception.
        """
        Exception.__init__(self, message)
        self._message = message
        self._cause = cause

    def __str__(self):
        return self._message

    def get_message(self):
        return self._message

    def get_cause(self):
        return self._cause


class ConfigError(PySafeSetError):
    """Raised when a configuration is invalid, lists all violated fields."""

    def __init__(self, errors: List[str], cause=None):
        PySafeSetError.__init__(self, 'Invalid configuration:\n' + '\n'.join('  - ' + e for e in errors), cause)
        self.errors = list(errors)


class InfeasibleError(PySafeSetError):
    """Raised when an optimization problem is infeasible."""

    def __init__(self, message: str = "", diagnostic: dict = None, cause=None):
        PySafeSetError.__init__(self, message, cause)
        self.diagnostic = {} if diagnostic is None else diagnostic


class UnboundedError(PySafeSetError):
    """Raised when an objective is unbounded."""
    pass


class NumericalError(PySafeSetError):
    """Raised when a solver fails numerically."""

    def __init__(self, message: str = "", residuals: dict = None, iterations: int = None, cause=None):
        PySafeSetError.__init__(self, message, cause)
        self.residuals = {} if residuals is None else residuals
        self.iterations = iterations


class RankDeficientError(PySafeSetError):
    """Raised when the data matrix [Z0; V0] does not have full row rank."""

    def __init__(self, rank: int, required: int, cause=None):
        PySafeSetError.__init__(self, 'Data matrix has rank %d, but %d is required, collect more or richer data.'
                                % (rank, required), cause)
        self.rank = rank
        self.required = required


class StateBlowUpError(PySafeSetError):
    """Raised when a simulated state diverges."""

    def __init__(self, time: float, cause=None):
        PySafeSetError.__init__(self, 'State blew up at t=%g.' % time, cause)
        self.time = time


class CertificateError(PySafeSetError):
    """Raised when a Gram certificate fails its independent check."""
    pass


__all__ = ['PySafeSetError', 'ConfigError', 'InfeasibleError', 'UnboundedError', 'NumericalError',
           'RankDeficientError', 'StateBlowUpError', 'CertificateError']
