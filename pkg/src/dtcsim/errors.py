class ConfigError(ValueError):
    """A run configuration is malformed or inconsistent."""


class CapacityError(RuntimeError):
    """A requested computation exceeds an enforced size or work budget."""
