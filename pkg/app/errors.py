"""
Exceptions raised by the toolkit
"""

from typing import Any, Optional


class ToolkitError(Exception):
    """Base class for all toolkit errors"""


class DimensionMismatch(ToolkitError, ValueError):
    """Operands live in spaces of different dimension"""


class ParentMismatch(ToolkitError, ValueError):
    """Elements or maps belong to different algebras"""


class NotADerivation(ToolkitError, ValueError):
    """A linear map fails the Leibniz rule on a pair of basis elements"""

    def __init__(self, message: str, pair: Optional[tuple] = None):
        super().__init__(message)
        self.pair = pair


class CatalogError(ToolkitError, ValueError):
    """Unknown catalog name or a size bound exceeded"""


class AlgebraFileError(ToolkitError, ValueError):
    """
    An algebra or seed file could not be parsed

    `location` is "line L, column C" for JSON syntax errors and a field path
    such as "structure_constants.0.1.2" for content errors.
    """

    def __init__(self, message: str, location: Optional[str] = None):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class ConsistencyError(ToolkitError, RuntimeError):
    """
    A computed object contradicts a proposition it must satisfy

    Only implementation bugs (or deliberately corrupted inputs) reach this.
    """

    def __init__(self, proposition: str, message: str, witness: Any = None):
        super().__init__(f"[{proposition}] {message}")
        self.proposition = proposition
        self.witness = witness
