"""Exception types raised across the package."""


class ThermalFTError(Exception):
    """Base class for package errors."""


class ConfigError(ThermalFTError, ValueError):
    """Invalid configuration. ``code`` identifies the failed check."""

    def __init__(self, message, code="E_CONFIG"):
        super().__init__(f"[{code}] {message}")
        self.code = code


class DomainError(ThermalFTError, ValueError):
    """Argument outside the domain of a mathematical operation."""


class UsageError(ThermalFTError, ValueError):
    """Operands that cannot be combined (mismatched grids, lengths)."""
