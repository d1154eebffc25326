"""Exact Weyl-Heisenberg and Clifford group structures for single and composite qudit systems."""

__version__ = "0.1.0"
