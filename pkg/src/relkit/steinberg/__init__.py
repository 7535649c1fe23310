"""Presentations of Steinberg groups over finite rings and coset enumeration."""
from .cosets import BACKEND, BACKENDS, CosetOverflow, CosetTable, todd_coxeter
from .presentation import Presentation, parse_text, presentation
from .verify import enumerate_steinberg, verify_K2_centrality, verify_mono, verify_st_ker

__all__ = [
    "BACKEND", "BACKENDS", "CosetOverflow", "CosetTable", "todd_coxeter", "Presentation",
    "parse_text", "presentation", "enumerate_steinberg", "verify_K2_centrality",
    "verify_mono", "verify_st_ker",
]
