"""Exception hierarchy shared by every module."""

from __future__ import annotations


class LaurentKitError(Exception):
    """Base class for all library errors."""


class Unsupported(LaurentKitError):
    """The request is well formed but outside the supported scope."""


class WrongBase(Unsupported):
    """The operation is not available over this base ring."""


class NotIdempotent(LaurentKitError):
    pass


class ObjectMismatch(LaurentKitError):
    """Source and target objects do not line up."""


class SupportViolation(LaurentKitError):
    """A Laurent support lies outside what the receiving functor allows."""


class NotInvertible(LaurentKitError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NotRankClassified(Unsupported):
    pass


class NotAHomotopy(LaurentKitError):
    pass


class NotAContraction(LaurentKitError):
    pass


class NotASplitting(LaurentKitError):
    pass


class NotACofibration(LaurentKitError):
    pass


class BadCertificate(LaurentKitError):
    def __init__(self, message: str, location=None):
        super().__init__(message)
        self.location = location


class WindowTooSmall(LaurentKitError):
    pass


class IdentityViolated(LaurentKitError):
    """A runtime-asserted identity inside a construction failed."""

    def __init__(self, name: str, location=None):
        super().__init__(f"identity violated: {name}" + (f" at {location}" if location is not None else ""))
        self.name = name
        self.location = location


class ConfigError(LaurentKitError):
    """Malformed JSON or CLI configuration; carries a location path."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.message = message
        self.location = location
