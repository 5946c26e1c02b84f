"""Exception hierarchy shared by every module."""


class TropilatError(Exception):
    """Base class for all library errors."""


class HeightMismatchError(TropilatError, ValueError):
    pass


class DimensionMismatchError(TropilatError, ValueError):
    pass


class EmptySetError(TropilatError):
    """Raised when a point is requested from an empty polyhedron."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class PreconditionError(TropilatError):
    """A documented precondition failed; ``witness`` carries the evidence."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CapExhaustedError(TropilatError):
    """An integer search ran past its configured cap."""

    def __init__(self, message, last_tried=None):
        super().__init__(message)
        self.last_tried = last_tried


class UnsupportedError(TropilatError):
    pass


class VerificationError(TropilatError):
    """A constructed object failed its own independent verifier (a bug)."""

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


class NotWCombinationError(PreconditionError):
    """g differs from every generator at ``witness``."""


class NotLipschitzError(PreconditionError):
    """``witness`` is a pair (x, y) violating the claimed Lipschitz bound."""


class InputError(TropilatError, ValueError):
    """Malformed JSON input; ``path`` locates the offending value."""

    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path
