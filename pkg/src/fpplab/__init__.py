"""Simulation lab for planar first-passage percolation and its midpoint/shift arguments."""

__version__ = "0.1.0"
