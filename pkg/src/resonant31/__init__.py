"""Resonant 3:1 normal-form dynamics of two cubically coupled oscillators."""
from .errors import ConfigError, Rejection

__version__ = "0.1.0"

__all__ = ["ConfigError", "Rejection", "__version__"]
