"""Exception types shared across the package."""


class DataError(ValueError):
    """Raised when an input file or record fails validation."""


class ConfigError(ValueError):
    """Raised when a configuration value is out of range or missing."""
