"""Exception types raised across the package."""


class DiachronError(Exception):
    """Base class for all package-specific errors."""


class MalformedFilename(DiachronError, ValueError):
    """Filename does not match ``<prefix>_<year>_<id>.txt`` or the year is out of range."""


class EmptyCorpus(DiachronError):
    """A corpus scan produced no usable documents."""


class EmptyHistogram(DiachronError, ValueError):
    """A summary was requested for a histogram with no observations."""


class NonPositiveLength(DiachronError, ValueError):
    """A sentence length below 1 was offered to a histogram."""


class InvalidRange(DiachronError, ValueError):
    """A bucket range violates 1 <= lo <= hi."""


class UndefinedRate(DiachronError, ZeroDivisionError):
    """A per-million rate was requested with zero words but a nonzero count."""


class ConfigError(DiachronError, ValueError):
    """A config file or flag value could not be parsed."""
