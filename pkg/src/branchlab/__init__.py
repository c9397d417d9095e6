"""Trace-driven branch prediction lab for graph-analytics kernels."""

__version__ = "0.1.0"
