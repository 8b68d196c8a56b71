"""Tools for detecting and repairing poorly connected communities in graph clusterings."""

__version__ = "0.1.0"
