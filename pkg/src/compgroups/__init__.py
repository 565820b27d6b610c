"""Component groups of involutions and binary actions for small groups of Lie type."""

__version__ = "0.1.0"
