"""Exception hierarchy shared by all modules.

Every error raised on a precondition failure carries a short machine-readable
``name`` which the command-line front end reports verbatim.
"""


class NilcommError(Exception):
    name = "error"

    def __init__(self, message: str = "", name: str | None = None):
        super().__init__(message or self.name)
        if name is not None:
            self.name = name


class ShapeError(NilcommError, ValueError):
    name = "shape-mismatch"


class DomainError(NilcommError, ValueError):
    name = "domain-error"


class UnsupportedRegimeError(DomainError):
    name = "unsupported-regime"


class GeodesicError(DomainError):
    """The matrix logarithm left the structure group; callers fall back."""

    name = "geodesic-failure"
