"""Shared exception types."""


class ConfigError(ValueError):
    """Invalid graph, coin, or run configuration."""


class ToleranceError(RuntimeError):
    """A numerical invariant (unitarity, norm, trace) drifted past its bound."""
