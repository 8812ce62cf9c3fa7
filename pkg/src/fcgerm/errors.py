"""Exception hierarchy.

Errors that mean "the input is wrong" derive from ``InputError`` (CLI exit 1);
``Inconclusive`` and its subclasses mean the analysis could not decide (exit 2).
"""


class InputError(ValueError):
    pass


class InvalidSimplex(InputError):
    pass


class InvalidComplex(InputError):
    pass


class DegenerateSimplex(InputError):
    pass


class DegreeError(InputError):
    pass


class RingError(InputError):
    pass


class ShapeError(InputError):
    pass


class InvalidMap(InputError):
    pass


class NotAMorphism(InputError):
    pass


class InvalidRadius(InputError):
    pass


class NotAStrictTransform(InputError):
    pass


class InvalidCycle(InputError):
    pass


class NotInterior(InputError):
    pass


class PointInSupport(InputError):
    pass


class NotFound(InputError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "not found"


class NotFc(InputError):
    pass


class Inconclusive(Exception):
    """The hypotheses of a decision procedure are not met; not a refutation."""

    def __init__(self, message, reason="inconclusive", **details):
        super().__init__(message)
        self.reason = reason
        self.details = details


class InconclusiveLocus(Inconclusive):
    pass


class NoRepresentative(Inconclusive):
    pass


class WitnessVerificationFailed(RuntimeError):
    pass


class ClampWarning(UserWarning):
    pass


class SchemaError(InputError):
    pass
