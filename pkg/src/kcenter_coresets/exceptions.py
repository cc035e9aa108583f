"""
k-center coresets exceptions.

This module provides custom exceptions for the k-center coresets toolkit.
"""

from typing import Optional


class KCenterError(Exception):
    """Base exception for k-center toolkit errors."""

    pass


class KCenterUsageError(KCenterError):
    """Exception raised when an operation is called with invalid arguments."""

    pass


class KCenterGuardError(KCenterUsageError):
    """Exception raised when an exhaustive search would exceed its guard."""

    def __init__(self, message: str, bound: Optional[int] = None, limit: Optional[int] = None):
        super().__init__(message)
        self.bound = bound
        self.limit = limit


class KCenterConfigError(KCenterError):
    """Exception raised for configuration errors."""

    pass


class KCenterFileError(KCenterError):
    """Exception raised for file-related errors."""

    pass


class KCenterInternalError(KCenterError):
    """Exception raised when a proven guarantee does not hold at runtime."""

    pass
