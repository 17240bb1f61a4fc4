"""Exception types shared across the package.

The hierarchy is flat on purpose: callers either catch the base class or a
specific failure they know how to handle.  Solver failures carry enough
context (residuals, suggestions) to be actionable from the command line.
"""


class SlotBrillouinError(Exception):
    """Base class for all package-specific errors."""


class DomainError(SlotBrillouinError, ValueError):
    """An input is outside the physically meaningful range."""


class MaterialNotFoundError(SlotBrillouinError, KeyError):
    """Requested material name is not in the table."""

    def __init__(self, name: str, available: list[str]):
        self.name = name
        self.available = sorted(available)
        super().__init__(
            f"unknown material {name!r}; available: {', '.join(self.available)}"
        )


class MeshBudgetError(SlotBrillouinError, RuntimeError):
    """Mesh generation would exceed the configured cell budget."""

    def __init__(self, cells: int, budget: int, suggestion: str):
        self.cells = cells
        self.budget = budget
        self.suggestion = suggestion
        super().__init__(
            f"mesh would use {cells} cells, budget is {budget}; {suggestion}"
        )


class ConvergenceError(SlotBrillouinError, RuntimeError):
    """Eigensolver failed to produce usable modes."""

    def __init__(self, message: str, residuals=None):
        self.residuals = [] if residuals is None else list(residuals)
        super().__init__(message)


class StateError(SlotBrillouinError, RuntimeError):
    """An object is used before a required preparation step."""


class UnsupportedSchemeError(SlotBrillouinError, ValueError):
    """A requested scattering configuration is out of scope."""


class ConfigError(SlotBrillouinError, ValueError):
    """Configuration file failed validation.

    ``problems`` holds every path-qualified message found, not just the
    first one, so a user can fix a file in one pass.
    """

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        lines = "\n  ".join(self.problems)
        super().__init__(f"invalid configuration:\n  {lines}")
