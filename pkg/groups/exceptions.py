"""Error hierarchy shared by the group engine and the polytope tools."""

from typing import Any, Dict, Optional


class PolytopeError(Exception):
    """Base class for every error raised by polytope_lab."""


class WordSyntaxError(PolytopeError, ValueError):
    """A word does not follow the grammar or names an unknown generator."""

    def __init__(self, message: str, position: Optional[int] = None, text: str = ""):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class PresentationFormatError(PolytopeError, ValueError):
    """A presentation file line could not be understood."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceLimitError(PolytopeError):
    """A configured cap was reached before the computation finished."""

    def __init__(self, message: str, stats: Optional[Dict[str, Any]] = None):
        self.stats = dict(stats or {})
        super().__init__(message)


class CosetLimitError(ResourceLimitError):
    """Coset enumeration ran out of table rows."""


class EnumerationLimitError(ResourceLimitError):
    """An element, intersection or lattice enumeration exceeded its cap."""


class ConsistencyError(PolytopeError):
    """Two independent computations of the same quantity disagree."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        self.diagnostics = dict(diagnostics or {})
        super().__init__(message)


class RelationViolationError(ConsistencyError):
    """A standard rotation relator fails on the constructed generators."""
