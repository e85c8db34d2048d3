"""Exception types raised across the package."""


class GaugeJetError(Exception):
    """Base class for all package errors."""


class DivisionNearZero(GaugeJetError, ZeroDivisionError):
    pass


class DimensionMismatch(GaugeJetError, ValueError):
    pass


class GroupMismatch(GaugeJetError, ValueError):
    pass


class SingularMatrix(GaugeJetError, ValueError):
    pass


class FiberMismatch(GaugeJetError, ValueError):
    pass


class ComposabilityError(GaugeJetError, ValueError):
    pass


class DegenerateBisection(GaugeJetError, ValueError):
    pass


class NotSemiholonomous(GaugeJetError, ValueError):
    pass


class BasePointMismatch(GaugeJetError, ValueError):
    pass


class FirstJetMismatch(GaugeJetError, ValueError):
    pass


class ConfigError(GaugeJetError, ValueError):
    pass


class ConventionUnpinned(GaugeJetError, RuntimeError):
    pass
