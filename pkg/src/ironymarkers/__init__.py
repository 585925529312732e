"""Irony-marker feature extraction, classification and frequency analysis."""

__version__ = "0.1.0"
