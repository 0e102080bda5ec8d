"""Exception hierarchy shared by the library and the CLI exit-code contract."""


class BallcoverError(Exception):
    """Base class for all library errors."""


class InputFormatError(BallcoverError):
    """Malformed input file or unparseable argument (CLI exit 2)."""


class PreconditionError(BallcoverError):
    """An operation was called outside its contract (CLI exit 3)."""


class InternalInconsistencyError(BallcoverError):
    """A certified quantity failed its own re-check; never swallowed (CLI exit 4)."""


class CertificateFailure(BallcoverError):
    """A constructed covering failed its coverage certificate (CLI exit 5).

    Carries the offending covering so callers can inspect or dump it.
    """

    def __init__(self, message, covering=None, certificate=None):
        super().__init__(message)
        self.covering = covering
        self.certificate = certificate


class TransferExhausted(BallcoverError):
    """A smooth-point scan hit its index bound without a transferable witness."""

    def __init__(self, message, n_max=None, best_rho=None):
        super().__init__(message)
        self.n_max = n_max
        self.best_rho = best_rho


class NotExposedError(PreconditionError):
    """A functional is not an exposed point of the dual ball.

    ``duality_info`` holds whatever evidence the check produced (e.g. the
    non-singleton duality set of the candidate norming point).
    """

    def __init__(self, message, duality_info=None):
        super().__init__(message)
        self.duality_info = duality_info


class SeparationHypothesisError(PreconditionError):
    """A target point is not strictly positive under any supplied functional."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point
