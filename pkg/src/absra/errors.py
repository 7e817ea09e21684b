"""Exception hierarchy shared by every module."""


class AbsraError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(AbsraError):
    """A model or attack description violates a structural invariant."""


class AttributeMismatchError(ValidationError):
    """Two alphabets declare the same event name with different flags."""


class ProtectionViolationError(ValidationError):
    """An alteration relation lets a protected event be replaced."""


class CapacityError(AbsraError):
    """A construction would exceed a configured resource bound."""


class DomainError(AbsraError):
    """An operation was called outside its precondition."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ConfigError(AbsraError):
    """Unknown mode or option value."""


class ModelSyntaxError(ValidationError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
