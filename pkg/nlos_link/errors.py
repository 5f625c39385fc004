"""
NLOS Link Error Types

Provides structured error handling for the optical link libraries and the simulator.
"""
from typing import List, Optional, Tuple


class NLOSLinkError(Exception):
    """Base exception for all nlos_link operations."""
    pass


class DomainError(NLOSLinkError, ValueError):
    """A numeric argument is outside the operation's domain."""

    def __init__(self, message: str, argument: str = None, value=None):
        self.argument = argument
        self.value = value
        super().__init__(message)


class DegenerateGeometryError(NLOSLinkError):
    """Circle centers coincide or are collinear, so no unique solution exists."""

    def __init__(self, message: str, reason: str = None):
        self.reason = reason
        super().__init__(message)


class GridRangeError(NLOSLinkError, IndexError):
    """A position or cell id lies outside the cell grid."""

    def __init__(self, message: str, cell: Optional[Tuple[int, int]] = None):
        self.cell = cell
        super().__init__(message)


class SearchMissError(NLOSLinkError):
    """The node was not found anywhere in its search set (location protocol violation)."""

    def __init__(self, message: str, node_id: str = None, probed: List[Tuple[int, int]] = None):
        self.node_id = node_id
        self.probed = list(probed or [])
        super().__init__(message)


class NotInvertibleError(NLOSLinkError):
    """The value shares a factor with the modulus."""

    def __init__(self, message: str, value: int = None, modulus: int = None):
        self.value = value
        self.modulus = modulus
        super().__init__(message)


class HandshakeStateError(NLOSLinkError):
    """A handshake operation was invoked in the wrong session state."""

    def __init__(self, message: str, state=None, expected=None):
        self.state = state
        self.expected = expected
        super().__init__(message)


class ProtocolError(NLOSLinkError):
    """A peer value or wire frame violates the key agreement protocol."""
    pass


class ConfigError(NLOSLinkError):
    """Scenario configuration failed validation."""

    def __init__(self, message: str, field_path: str = None):
        self.field_path = field_path
        super().__init__(message)
