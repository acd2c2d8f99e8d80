"""Exact information-leakage analysis for index coding."""

__version__ = "0.1.0"
