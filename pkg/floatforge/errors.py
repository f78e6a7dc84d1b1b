"""
Error Hierarchy Module

All domain errors raised by FloatForge derive from FloatForgeError. Each
class carries the process exit code the command line maps it to:

    0  success
    1  configuration error (ConfigError)
    2  numerical divergence (DivergenceError)
    3  consistency violation (ConsistencyError)

ConfigError and ValidityError also subclass ValueError, and the runtime
errors subclass RuntimeError, so callers that only know the builtin
exception types keep working.

Author: FloatForge Developers
License: MIT
"""

from typing import Optional, Sequence, Tuple


class FloatForgeError(Exception):
    """Base class for every error raised by the package."""

    exit_code: int = 1


class ConfigError(FloatForgeError, ValueError):
    """
    Invalid scenario configuration.

    Args:
        message: Human readable description of the problem.
        line: 1-based line number in the config text, if known.
    """

    exit_code = 1

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidityError(FloatForgeError, ValueError):
    """A hydrostatic formula was queried outside its range of validity."""

    exit_code = 1


class DivergenceError(FloatForgeError, RuntimeError):
    """Non-finite values were detected in the lattice or a body state."""

    exit_code = 2

    def __init__(self, message: str, step: Optional[int] = None) -> None:
        self.step = step
        self.detail = message
        if step is not None:
            message = f"step {step}: {message}"
        super().__init__(message)


class ConsistencyError(FloatForgeError, RuntimeError):
    """
    A structural invariant of the cell-state field was broken.

    Args:
        message: Description of the violation.
        step: Time step at which it was detected.
        cells: Offending cell coordinates (at most a handful are reported).
    """

    exit_code = 3

    def __init__(
        self,
        message: str,
        step: Optional[int] = None,
        cells: Optional[Sequence[Tuple[int, int, int]]] = None,
    ) -> None:
        self.step = step
        self.detail = message
        self.cells = [tuple(int(v) for v in c) for c in (cells if cells is not None else [])]
        if self.cells:
            shown = ", ".join(str(c) for c in self.cells[:8])
            more = f" (+{len(self.cells) - 8} more)" if len(self.cells) > 8 else ""
            message = f"{message} at cells {shown}{more}"
        if step is not None:
            message = f"step {step}: {message}"
        super().__init__(message)
