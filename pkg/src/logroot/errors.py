"""Exception hierarchy shared by all modules."""


class LogRootError(Exception):
    """Base class for every error raised by the package."""


class BothZero(LogRootError):
    pass


class NoConvergence(LogRootError):
    pass


class NotCoprime(LogRootError):
    pass


class BothConstant(LogRootError):
    pass


class ZeroPolynomial(LogRootError):
    pass


class AtSingularity(LogRootError):
    pass


class TraceStall(LogRootError):
    pass


class CertificateShort(LogRootError):
    pass


class Diverged(LogRootError):
    pass


class HitSingularity(Diverged):
    pass


class TooCloseToZero(LogRootError):
    pass


class ArgJumpTooLarge(LogRootError):
    pass


class Inconsistent(LogRootError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class BadParams(LogRootError):
    pass


class HypothesisFailed(LogRootError):
    def __init__(self, message, z=None):
        super().__init__(message)
        self.z = z
