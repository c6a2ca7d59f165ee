"""Exception hierarchy shared by all modules."""


class SteerCrlbError(Exception):
    """Base class for every error raised by this package."""


class NonConvergentIntegral(SteerCrlbError):
    pass


class UnsupportedProfile(SteerCrlbError):
    pass


class NoSolution(SteerCrlbError):
    pass


class FrequencyOutOfRange(SteerCrlbError):
    pass


class ScaleOutOfRange(SteerCrlbError):
    pass


class NyquistViolation(SteerCrlbError):
    pass


class IndexMismatch(SteerCrlbError):
    pass


class IllPosed(SteerCrlbError):
    pass


class ZeroPattern(SteerCrlbError):
    pass


class MissingCoefficient(SteerCrlbError):
    pass


class InsufficientTable(SteerCrlbError):
    pass


class DuplicateIndex(SteerCrlbError):
    pass


class ExcludedGamma(SteerCrlbError):
    pass


class GroupingMismatch(SteerCrlbError):
    pass


class SingularCovariance(SteerCrlbError):
    pass


class DegenerateTemplate(SteerCrlbError):
    pass


class TrialFailure(SteerCrlbError):
    """A Monte Carlo trial raised; ``trial`` holds the failing index."""

    def __init__(self, trial, cause):
        super().__init__(f"trial {trial} failed: {cause!r}")
        self.trial = trial
        self.cause = cause
