"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures without a
lookup table of its own.
"""


class MultiplicityError(Exception):
    exit_code = 5

    def record(self):
        return {"error": type(self).__name__, "message": str(self), "exit_code": self.exit_code}


class ValidationError(MultiplicityError, ValueError):
    exit_code = 2


class ParseError(ValidationError):
    def __init__(self, message, line=None, column=None, field=None):
        super().__init__(message)
        self.line = line
        self.column = column
        self.field = field

    def record(self):
        rec = super().record()
        rec.update(line=self.line, column=self.column, field=self.field)
        return rec


class PoleNotInChart(MultiplicityError, ValueError):
    """The point is the pole that the target chart does not cover."""


class DegenerateFiber(MultiplicityError):
    """Both fiber components vanish, so the kernel is two-dimensional."""
    exit_code = 3


class NumericalFailure(MultiplicityError):
    exit_code = 5


class UndersampledLoop(NumericalFailure):
    pass


class ZeroVector(NumericalFailure):
    pass


class NonIntegralWinding(NumericalFailure):
    pass


class BranchJump(NumericalFailure):
    pass


class SectionVanishesOnCurve(NumericalFailure):
    pass


class NewtonDivergence(NumericalFailure):
    pass


class DegenerateCritical(NumericalFailure):
    pass


class TracingFailure(NumericalFailure):
    pass


class OrientationAmbiguous(NumericalFailure):
    pass


class NonGenericLevelSet(MultiplicityError):
    exit_code = 3


class NonGenericSymbol(MultiplicityError):
    exit_code = 3


class InconsistentIndices(MultiplicityError):
    exit_code = 4

    def __init__(self, ind_direct, ind_w_minus_v, ind_formula):
        super().__init__(
            f"index mismatch: direct={ind_direct}, w-v={ind_w_minus_v}, formula={ind_formula}")
        self.values = (ind_direct, ind_w_minus_v, ind_formula)

    def record(self):
        rec = super().record()
        rec["values"] = list(self.values)
        return rec


class OutputError(MultiplicityError):
    """An artifact could not be written."""
    exit_code = 5
