"""
Shared helpers for sparsefactor.
"""

from .serialization import read_f64, read_json, write_f64, write_json

__all__ = ['read_f64', 'read_json', 'write_f64', 'write_json']
