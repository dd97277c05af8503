"""Residual finiteness growth toolkit."""

__version__ = "0.1.0"
