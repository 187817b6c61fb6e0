"""Exception hierarchy shared by every module."""


class CanonCutError(Exception):
    pass


class GraphFormatError(CanonCutError, ValueError):
    """Malformed graph text input."""


class InvalidCutError(CanonCutError, ValueError):
    """A cut side that is empty, covers every vertex, or names unknown vertices."""


class StructureError(CanonCutError, ValueError):
    """Input does not have the promised shape (not a tree, not a partition, ...)."""


class DomainError(CanonCutError, ValueError):
    pass


class CapacityError(CanonCutError, ValueError):
    """Instance too large for an exhaustive routine."""


class ConnectivityError(CanonCutError, ValueError):
    pass


class ConfigError(CanonCutError, ValueError):
    pass
