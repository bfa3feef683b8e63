"""Exception hierarchy shared by all lipph modules."""


class LipphError(Exception):
    """Base class; the CLI maps these to exit code 2."""


# persistence_core
class InvalidComplex(LipphError):
    pass


class MissingFace(InvalidComplex):
    pass


class FiltrationOrderViolation(InvalidComplex):
    pass


class NotAComplex(InvalidComplex):
    pass


class BadInterval(LipphError):
    pass


# diagram_metrics
class NegativeEpsilon(LipphError):
    pass


# targets
class TooSmall(LipphError):
    pass


class InvalidMetricComplex(LipphError):
    pass


# mapspace
class Explosion(LipphError):
    pass


class FunctionalMismatch(LipphError):
    pass


class NotSimplyConnectedAtScale(LipphError):
    pass


# dga
class DegreeMismatch(LipphError):
    pass


class BasisUnknown(LipphError):
    pass


class EndpointMismatch(LipphError):
    pass


class IncompleteHomotopy(LipphError):
    pass


class EndpointViolation(LipphError):
    pass


# cli
class UnknownPreset(LipphError):
    pass
