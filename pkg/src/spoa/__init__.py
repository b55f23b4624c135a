"""Exact k-strong price-of-anarchy bounds for resource allocation games."""

__version__ = "0.1.0"
