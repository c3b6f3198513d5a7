"""Weighted l1 recovery with multiple support estimates."""
__version__ = "0.1.0"
