class ScatpolyError(Exception):
    """Base class for library errors."""


class DomainError(ScatpolyError, ValueError):
    """An arithmetic operation was applied outside its domain (e.g. 1/0)."""


class ParameterError(ScatpolyError, ValueError):
    """A constructor precondition failed; the message names the condition."""


class ResourceError(ScatpolyError, RuntimeError):
    """A computation would exceed its configured enumeration budget."""


class SelfCheckError(ScatpolyError, RuntimeError):
    """Two independent computations of the same object disagreed."""
