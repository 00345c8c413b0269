"""
sparsefactor - sparse full-rank factorization of large square matrices.
"""

__version__ = "0.1.0"
