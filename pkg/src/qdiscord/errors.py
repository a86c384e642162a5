"""Exception types raised by the library."""


class DiscordError(Exception):
    """Base class for all errors raised by qdiscord."""


class NotHermitian(DiscordError, ValueError):
    pass


class DimensionMismatch(DiscordError, ValueError):
    pass


class IndexOutOfRange(DiscordError, IndexError):
    pass


class DegenerateGeometry(DiscordError, ValueError):
    """The impurity spin sits on top of a chain spin."""


class NotNormalized(DiscordError, ValueError):
    pass


class InvariantViolation(DiscordError, ArithmeticError):
    """A numerical invariant (trace, positivity, ...) failed beyond tolerance."""


class ConfigError(DiscordError, ValueError):
    pass
