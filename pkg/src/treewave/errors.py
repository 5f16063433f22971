"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Structural parameters disagree (branching number q, scalar mode)."""


class DomainError(ValueError):
    """Input lies outside an operation's domain (e.g. a non-even sequence)."""


class ModeError(TypeError):
    """Operation is unavailable in the requested scalar mode."""


class TruncationError(RuntimeError):
    """An enumeration would leave the declared truncation ball."""


class ConsistencyError(RuntimeError):
    """Two routes that must agree identically produced different values."""


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the field."""
