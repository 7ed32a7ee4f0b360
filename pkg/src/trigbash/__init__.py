"""Randomized numeric verification of triangle geometry."""

__version__ = "0.1.0"
