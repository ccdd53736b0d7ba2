"""
Exceptions raised by the qmachine package.
"""


class QMachineError(Exception):
    """Base exception for all qmachine errors."""
    def __init__(self, message: str, *, cause: str = None, details: dict = None):
        super().__init__(message)
        self.cause = cause or "Unknown cause"
        self.details = {k: v for k, v in (details or {}).items() if v is not None}

    def __str__(self) -> str:
        base_msg = super().__str__()
        if self.details:
            details_str = ", ".join(f"{k}={v}" for k, v in self.details.items())
            return f"{base_msg} (Cause: {self.cause}, Details: {details_str})"
        return f"{base_msg} (Cause: {self.cause})"


class DomainError(QMachineError):
    """Raised when an argument lies outside the domain of an operation."""
    def __init__(self, message: str, *, argument: str = None, value=None,
                 expected: str = None):
        details = {
            'argument': argument,
            'value': value,
            'expected': expected
        }
        super().__init__(message, cause="Argument outside domain", details=details)


class CollapseUndefinedError(QMachineError):
    """Raised when a state is collapsed onto a branch it has no weight in."""
    def __init__(self, message: str, *, probability: float = None):
        super().__init__(message, cause="Zero-probability branch",
                         details={'probability': probability})


class PreconditionError(QMachineError):
    """Raised when the structural precondition of an operation does not hold."""
    def __init__(self, message: str, *, operation: str = None, witness=None):
        details = {
            'operation': operation,
            'witness': witness
        }
        super().__init__(message, cause="Precondition failed", details=details)


class CapExceededError(QMachineError):
    """Raised when an exhaustive search would exceed its enumeration cap."""
    def __init__(self, message: str, *, size: int = None, cap: int = None):
        super().__init__(message, cause="Enumeration cap exceeded",
                         details={'size': size, 'cap': cap})


class SpsFormatError(QMachineError):
    """Raised when a state property space document cannot be decoded."""
    def __init__(self, message: str, *, field: str = None, path: str = None):
        super().__init__(message, cause="Malformed SPS document",
                         details={'field': field, 'path': path})


class InvariantViolationError(QMachineError):
    """Raised when a computed result breaks one of its documented invariants."""
    def __init__(self, message: str, *, invariant: str = None, observed=None,
                 bound=None):
        details = {
            'invariant': invariant,
            'observed': observed,
            'bound': bound
        }
        super().__init__(message, cause="Invariant violated", details=details)
