"""Exception hierarchy for permdetect."""


class PermDetectError(Exception):
    """Base class for all errors raised by this package."""


class DatasetError(PermDetectError, ValueError):
    pass


class EmptyClass(DatasetError):
    pass


class NonFinite(DatasetError):
    pass


class ShapeMismatch(DatasetError):
    pass


class DegenerateClass(DatasetError):
    pass


class NotSymmetric(PermDetectError, ValueError):
    pass


class DimensionMismatch(PermDetectError, ValueError):
    pass


class MissingOracleSigma(PermDetectError, ValueError):
    pass


class SingleClassTrainingSet(PermDetectError):
    """Training set holds a single class; callers apply their degenerate-fold policy."""


class TooManyFolds(PermDetectError, ValueError):
    pass


class AllHoldoutsEmpty(PermDetectError):
    pass


class BadRho(PermDetectError, ValueError):
    pass


class SingularSigma(PermDetectError, ValueError):
    pass


class ConfigError(PermDetectError, ValueError):
    pass


class MissingCell(PermDetectError, KeyError):
    pass


class ScenarioFailure(PermDetectError, RuntimeError):
    """A statistic failed inside a scenario; carries the replication id."""

    def __init__(self, scenario, replication, cause):
        self.scenario = scenario
        self.replication = replication
        self.cause = cause
        super().__init__(f"scenario {scenario!r}, replication {replication}: {cause!r}")
