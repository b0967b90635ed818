"""Combinatorial evolution and forecasting of hierarchical modular systems."""

__version__ = "0.1.0"
