"""Exception hierarchy shared by all torface modules."""

from __future__ import annotations


class TorfaceError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(TorfaceError):
    """Input data violates a structural rule.

    ``rule`` names the violated rule and ``cells`` lists the cell ids
    involved, so the CLI can produce a located diagnostic.
    """

    rule = "Validation"

    def __init__(self, message: str, cells: tuple = ()):
        super().__init__(message)
        self.cells = tuple(cells)

    def __str__(self) -> str:
        where = f" [{', '.join(map(str, self.cells))}]" if self.cells else ""
        return f"{self.rule}: {self.args[0]}{where}"


class MissingEmptyCell(ValidationError):
    rule = "MissingEmptyCell"


class NotAPoset(ValidationError):
    rule = "NotAPoset"


class NoMeet(ValidationError):
    rule = "NoMeet"


class BadIncidence(ValidationError):
    rule = "BadIncidence"


class DimGap(ValidationError):
    rule = "DimGap"


class RankMismatch(ValidationError):
    rule = "RankMismatch"


class GroupNotSaturated(ValidationError):
    rule = "GroupNotSaturated"


class FaceConditionFails(ValidationError):
    rule = "FaceConditionFails"


class FunctorialityFails(ValidationError):
    rule = "FunctorialityFails"


class FaceWithoutCell(ValidationError):
    rule = "FaceWithoutCell"


class NotPointed(ValidationError):
    rule = "NotPointed"


class CoordinateOverflow(ValidationError):
    rule = "CoordinateOverflow"


class ParseError(TorfaceError):
    """Malformed JSON input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line

    def __str__(self) -> str:
        loc = f" (line {self.line})" if self.line is not None else ""
        return f"ParseError{loc}: {self.args[0]}"


class NotInM(TorfaceError):
    """A degree element was expected in |M| but is not."""


class AmbiguousColimit(TorfaceError):
    """A colimit class has two different representatives in one cell.

    The direct-limit set is then not a union of the lattices Z M_sigma and
    the graded constructions are ill-defined for the input.
    """


class UndecidedAtCap(TorfaceError):
    """A localization membership question could not be settled in budget."""

    def __init__(self, degree, cell):
        super().__init__(f"membership of {degree} at cell {cell} undecided")
        self.degree = degree
        self.cell = cell


class UndecidedDegree(TorfaceError):
    def __init__(self, degree):
        super().__init__(f"strand at degree {degree} undecided")
        self.degree = degree


class NotConeWiseNormal(TorfaceError):
    pass


class SuppOrderViolated(TorfaceError):
    pass


class OutOfBox(TorfaceError):
    pass


class NoDegreeWithSupport(TorfaceError):
    pass


class BoxTooSmall(TorfaceError):
    pass


class OracleBoundExceeded(TorfaceError):
    pass
