"""Relative root systems, Chevalley commutator calculus and Steinberg group experiments."""

__version__ = "0.1.0"
