"""Exceptions raised by khcube."""

from __future__ import annotations

from typing import Optional, TYPE_CHECKING

if TYPE_CHECKING:
    from khcube.core.diagram import ValidationReport


class KhcubeError(Exception):
    """Base class for all khcube errors."""


class DiagramError(KhcubeError, ValueError):
    """A PD code failed to parse or a diagram failed validation.

    Args:
        message: Human-readable description
        report: Validation report, when the failure is semantic
        position: Character offset of a syntax error
    """

    def __init__(
        self,
        message: str,
        report: Optional["ValidationReport"] = None,
        position: Optional[int] = None,
    ):
        super().__init__(message)
        self.report = report
        self.position = position


class ContractError(KhcubeError, ValueError):
    """An operation was called outside its precondition."""


class CapExceededError(KhcubeError, RuntimeError):
    """A configured resource cap was exceeded."""

    def __init__(self, what: str, value: int, cap_name: str, cap: int):
        super().__init__(f"{what} = {value} exceeds {cap_name}={cap}")
        self.value = value
        self.cap_name = cap_name
        self.cap = cap
