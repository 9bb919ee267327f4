"""Exact strong zero modes in trigonometric integrable spin chains."""

__version__ = "0.1.0"
