"""
Exception types raised by swarmkit.
"""


class SwarmkitError(Exception):
    """Base class for every error raised by the package."""


class GeometryError(SwarmkitError):
    """Invalid geometric input (bad scalar, empty configuration, size mismatch)."""


class SymmetryError(SwarmkitError):
    """A symmetry query whose precondition does not hold."""


class TargetFunctionError(SwarmkitError):
    """A target function was built with invalid parameters or cannot proceed."""


class EngineError(SwarmkitError):
    """The simulation reached a state that the model forbids."""


class AssignmentError(SwarmkitError):
    """No surjective assignment exists for the requested algorithm."""


class SchedulerError(SwarmkitError):
    """A scheduler was configured with invalid parameters."""


class ScenarioError(SwarmkitError):
    """A scenario was requested with parameters outside its construction."""


class SpecParseError(SwarmkitError):
    """A run specification or configuration file could not be parsed."""


class TraceFormatError(SwarmkitError):
    """A trace file is malformed or has an unsupported version."""
