"""
Square-matrix approximation: Chord factor chains, their solver and the TSVD baseline.
"""

from .chain import (
    FactorChain,
    SparseSquareMatrix,
    chain_apply,
    chain_materialize,
    densify,
    fro_err,
    identity_factor,
    load_chain,
    row_of_product,
    save_chain,
    spmm_dense,
)
from .lowrank import TsvdResult, load_tsvd, rank_for_budget, reconstruct, save_tsvd, tsvd, tsvd_nnz
from .solver import FitReport, fit, init_chain, loss_and_grad, save_report

__all__ = [
    'FactorChain', 'SparseSquareMatrix', 'chain_apply', 'chain_materialize',
    'densify', 'fro_err', 'identity_factor', 'load_chain', 'row_of_product',
    'save_chain', 'spmm_dense', 'TsvdResult', 'rank_for_budget', 'reconstruct',
    'tsvd', 'tsvd_nnz', 'load_tsvd', 'save_tsvd', 'FitReport', 'fit', 'init_chain',
    'loss_and_grad', 'save_report',
]
