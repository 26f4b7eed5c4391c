"""Exception hierarchy shared by every layer of egalbandit."""


class EgalBanditError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(EgalBanditError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class HorizonError(DomainError):
    """The horizon T cannot be split into blocks of U steps."""


class StateError(EgalBanditError, RuntimeError):
    """An EgalUCB state was driven out of order (e.g. finalized mid-block)."""


class IngestError(EgalBanditError):
    """A trace or ratings file could not be turned into an instance."""


class ConfigError(EgalBanditError):
    """A configuration value is missing, unknown or inconsistent.

    Attributes:
        key (str | None): The offending configuration key, when one applies.
    """

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key
