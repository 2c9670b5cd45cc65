"""Exception types shared across the package."""


class TopoforgeError(Exception):
    """Base class for all errors raised by topoforge."""


class UnknownGroup(TopoforgeError):
    pass


class InvalidParameter(TopoforgeError):
    pass


class NumericalInconsistency(TopoforgeError):
    pass


class NotAdmissible(TopoforgeError):
    pass


class MultiplicityUnsupported(TopoforgeError):
    pass


class NotIncident(TopoforgeError):
    pass


class NotAPath(TopoforgeError):
    pass


class NotGaugeInvariant(TopoforgeError):
    pass


class BudgetExceeded(TopoforgeError):
    pass


class ZeroState(TopoforgeError):
    pass


class ZeroResult(TopoforgeError):
    pass


class ShapeMismatch(TopoforgeError):
    pass


class InvalidGeometry(TopoforgeError):
    pass


class NotConcatenable(TopoforgeError):
    pass


class CrossingUnsupported(TopoforgeError):
    pass


class ParseError(TopoforgeError):
    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


class GluingInconsistent(TopoforgeError):
    pass


class NonManifoldEdge(TopoforgeError):
    pass


class HasBoundary(TopoforgeError):
    pass


class InadmissibleBoundary(TopoforgeError):
    pass


class StructureUnsupported(TopoforgeError):
    pass
