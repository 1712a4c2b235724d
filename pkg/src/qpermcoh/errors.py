"""Exception hierarchy shared by all modules."""


class QPermError(Exception):
    """Base class for every error raised by the package."""


class ParseError(QPermError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f" (line {line}, column {column})"
        super().__init__(message + where)
        self.line = line
        self.column = column


class MissingImage(QPermError):
    pass


class NonOrientable(QPermError):
    pass


class InsufficientCompletion(QPermError):
    pass


class DimensionMismatch(QPermError):
    pass


class NotSquare(QPermError):
    pass


class InconsistentAugmentation(QPermError):
    pass


class NotAnAutomorphism(QPermError):
    pass


class CheckFailed(QPermError):
    def __init__(self, message, report=None, witness=None):
        super().__init__(message)
        self.report = report
        self.witness = witness


class WindowTooSmall(QPermError):
    pass


class IdentityNotDerivable(QPermError):
    def __init__(self, message, instance=None):
        super().__init__(message)
        self.instance = instance


class IllFormed(QPermError):
    pass


class RelationFails(QPermError):
    def __init__(self, message, certificate=None, witness=None):
        super().__init__(message)
        self.certificate = certificate
        self.witness = witness


class NotACocycle(QPermError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RepresentativeMismatch(NotACocycle):
    pass


class UnstableWindow(UserWarning):
    """Emitted when a degree-windowed result changes between D and D+1."""
