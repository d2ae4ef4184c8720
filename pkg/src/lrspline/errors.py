"""Exception hierarchy shared by every module of the package."""


class LRSplineError(Exception):
    """Base class for all errors raised by lrspline."""


class MeshError(LRSplineError):
    pass


class NonIncreasingKnots(MeshError):
    pass


class MultiplicityExceedsDegreePlusOne(MeshError):
    pass


class DanglingSplit(MeshError):
    pass


class NonConstantSplitResult(MeshError):
    pass


class MultiplicityOverflow(MeshError):
    pass


class SplitNotInMesh(MeshError):
    pass


class InvalidBoxPartition(MeshError):
    pass


class BSplineError(LRSplineError):
    pass


class BadKnotCount(BSplineError):
    pass


class KnotOutOfInterior(BSplineError):
    pass


class SplitDoesNotTraverse(BSplineError):
    pass


class ElementStraddlesSupportBoundaryImproperly(BSplineError):
    pass


class SpaceError(LRSplineError):
    pass


class LRRulesViolated(SpaceError):
    pass


class ExpandedSplitTooShort(SpaceError):
    pass


class NotADependence(LRSplineError):
    pass


class UnknownScenario(LRSplineError):
    pass


class ParseError(LRSplineError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class SemanticError(LRSplineError):
    def __init__(self, message, index=None):
        where = f" (insertion {index})" if index is not None else ""
        super().__init__(message + where)
        self.index = index
