"""Single source of truth for matineq version."""

__version__ = "0.1.0"
