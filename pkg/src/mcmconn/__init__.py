"""Exact decision procedures for connections on maximal Cohen-Macaulay modules."""

__version__ = "0.1.0"
