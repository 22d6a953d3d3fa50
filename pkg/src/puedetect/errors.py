"""Exception types raised across the toolkit."""


class ConfigError(ValueError):
    """Bad scenario config, unknown preset, or malformed input file."""


class ValidityError(ValueError):
    """A numeric precondition or a formula's validity window was violated."""
