"""Exception types shared across the package."""


class TermError(Exception):
    """Base class for every structured error raised by this package."""


class ParseError(TermError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class KindViolation(TermError):
    """A primitive not admitted by the requested category kind."""

    def __init__(self, message: str, path: tuple = ()):
        super().__init__(message + (f" [subterm path {list(path)}]" if path else ""))
        self.path = path


class TypeMismatch(TermError):
    """Composition whose inner domain/codomain objects disagree."""

    def __init__(self, message: str, path: tuple = ()):
        super().__init__(message + (f" [subterm path {list(path)}]" if path else ""))
        self.path = path


class SizeMismatch(TermError):
    """Graph composition with incompatible occurrence counts."""


class ShapeViolation(TermError):
    """Input does not have the syntactic shape an operation requires."""


class CompositionGap(TermError):
    """A diagram path whose adjacent arrows do not compose."""


class EndpointMismatch(TermError):
    """Two diagram paths that do not share domain and codomain."""


class ArityMismatch(TermError):
    """Shape hole count disagrees with a graph's occurrence counts."""
