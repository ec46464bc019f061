class ToricRicciError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(ToricRicciError, ValueError):
    """A mathematical precondition failed; ``witness`` carries the evidence."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RootDataError(PreconditionError):
    pass


class ComplexStructureError(PreconditionError):
    pass


class ChamberError(PreconditionError):
    pass


class PolytopeError(PreconditionError):
    pass


class SurjectivityError(PreconditionError):
    pass


class NotFanoError(PreconditionError):
    pass


class SchemaError(ToricRicciError, ValueError):
    """Malformed problem document. ``path`` addresses the offending field."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")
