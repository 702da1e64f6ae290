"""Dynamics of (2,2)-rational maps with a unique fixed point over Q_p."""

__version__ = "0.1.0"
