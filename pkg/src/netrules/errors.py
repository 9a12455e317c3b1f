"""Exception types shared across the package."""


class NetrulesError(Exception):
    """Base class for all errors raised by this package."""


class MalformedInput(NetrulesError):
    """A data file, schema, or config file could not be interpreted."""


class RangeError(NetrulesError):
    """A split interval lies outside the dataset."""


class InvalidConfig(NetrulesError):
    """A configuration value violates its documented constraints."""


class DimensionMismatch(NetrulesError):
    """Array shapes are inconsistent with the network or schema."""


class NoFeasibleEpsilon(NetrulesError):
    """No epsilon in the grid keeps the discretized network above the accuracy floor."""


class InseparablePattern(NetrulesError):
    """Two identical feature vectors carry different labels, so no pure rule exists."""


class DegenerateAttributeWarning(UserWarning):
    """An attribute's raw domain has zero width; its encoded feature is set to 0."""
