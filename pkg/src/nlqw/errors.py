"""Exception hierarchy shared across the package.

Argument/usage problems subclass ValueError; numeric failures (overflow,
non-convergence) subclass RuntimeError so callers can map them to distinct
exit codes.
"""


class WalkError(Exception):
    """Base class for all package errors."""


class ComponentError(WalkError, ValueError):
    """A spinor component index outside {1, 2}."""


class InitSpecError(WalkError, ValueError):
    """Malformed initial-state specification string."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class NumericsError(WalkError, RuntimeError):
    """Base class for numeric failures that are not usage errors."""


class WindowOverflowError(NumericsError):
    """Evolution would exceed the configured maximum lattice window."""


class RootFindingError(NumericsError):
    """A bracketed root search failed or produced inconsistent structure."""


class BranchRootError(NumericsError):
    """The requested soliton branch has no positive amplitude root."""
