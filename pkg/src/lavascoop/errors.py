"""Exception types raised across the package."""


class LavaError(Exception):
    """Base class for all package errors."""


class ContractViolation(LavaError, ValueError):
    """A documented precondition was not met by the caller."""


class DegenerateGeometryError(LavaError, ValueError):
    """A direction or distance is undefined for the given points."""


class InvalidActionError(LavaError, ValueError):
    pass


class MissingTargetError(LavaError, KeyError):
    pass


class NoBulkError(LavaError, ValueError):
    """Depth was requested from a scene without a bulk food layer."""


class NoTargetError(LavaError, ValueError):
    pass


class InvalidDemoError(LavaError, ValueError):
    pass


class InvalidInputError(LavaError, ValueError):
    pass


class LibraryIncompleteError(LavaError, KeyError):
    pass


class ScenarioError(LavaError, OSError):
    """A scenario, config, or demo file could not be read or parsed."""
