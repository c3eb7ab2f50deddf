"""Exact BCOV differential rings, Picard-Fuchs periods and the genus recursion."""

__version__ = "0.1.0"
