"""
Truncated SVD baseline and the equal-budget rank rule.

A rank-r TSVD stores U (N x r), V (N x r) and r singular values: 2Nr + r numbers.
"""

import logging
import math
import os
from dataclasses import dataclass

import numpy as np

from ..errors import InputError, InvalidDimensionError
from ..utils import read_f64, read_json, write_f64, write_json
from .chain import as_dense

logger = logging.getLogger(__name__)

OVERSAMPLE = 10
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITERS = 1000


@dataclass(eq=False)
class TsvdResult:
    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray

    @property
    def r(self) -> int:
        return int(self.singular_values.size)

    @property
    def n(self) -> int:
        return int(self.u.shape[0])

    @property
    def nnz(self) -> int:
        return tsvd_nnz(self.n, self.r)


def tsvd_nnz(n: int, r: int) -> int:
    return 2 * n * r + r


def rank_for_budget(n: int, nnz_budget: int) -> int:
    """Smallest r with r(2N+1) >= budget, capped at N."""
    per_rank = 2 * n + 1
    if nnz_budget < per_rank:
        raise InvalidDimensionError(
            f"Budget {nnz_budget} is below the cost of one rank ({per_rank}) for N={n}"
        )
    return min(n, math.ceil(nnz_budget / per_rank))


def _orthonormal(a: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(a)
    return q


def _fix_signs(u: np.ndarray, v: np.ndarray) -> None:
    # largest-magnitude entry of every right singular vector is non-negative
    pivots = np.argmax(np.abs(v), axis=0)
    flip = v[pivots, np.arange(v.shape[1])] < 0
    v[:, flip] *= -1.0
    u[:, flip] *= -1.0


def tsvd(x: np.ndarray, r: int, seed: int = 0, tol: float = DEFAULT_TOL,
         max_iters: int = DEFAULT_MAX_ITERS) -> TsvdResult:
    """Top-r singular triplets by two-sided orthogonal iteration.

    The block carries ``OVERSAMPLE`` extra columns; a Rayleigh-Ritz step on
    the block gives the triplets. Iteration stops once
    ||X^T U - V S||_F <= tol * ||X||_F.
    """
    x = as_dense(x, "input matrix")
    n = x.shape[0]
    if x.shape[1] != n:
        raise InvalidDimensionError(f"TSVD expects a square matrix, got {x.shape}")
    if not 1 <= r <= n:
        raise InvalidDimensionError(f"Rank must be in [1, {n}], got {r}")

    block = min(n, r + OVERSAMPLE)
    rng = np.random.default_rng(seed)
    q = _orthonormal(rng.standard_normal((n, block)))
    scale = max(float(np.linalg.norm(x)), np.finfo(float).tiny)

    for it in range(1, max_iters + 1):
        q = _orthonormal(x.T @ _orthonormal(x @ q))
        ub, s, wt = np.linalg.svd(x @ q, full_matrices=False)
        u = ub[:, :r]
        s = s[:r]
        v = q @ wt.T[:, :r]
        residual = np.linalg.norm(x.T @ u - v * s)
        if residual <= tol * scale:
            logger.debug("TSVD rank %d converged after %d iterations", r, it)
            break
    else:
        logger.warning("TSVD rank %d stopped at %d iterations (residual %.3e)", r, max_iters, residual)

    u, v = u.copy(), v.copy()
    _fix_signs(u, v)
    return TsvdResult(u=u, singular_values=s.copy(), v=v)


def reconstruct(t: TsvdResult) -> np.ndarray:
    """U diag(s) V^T."""
    return (t.u * t.singular_values) @ t.v.T


def save_tsvd(t: TsvdResult, directory: str) -> None:
    os.makedirs(directory, exist_ok=True)
    write_f64(os.path.join(directory, "u.f64"), t.u)
    write_f64(os.path.join(directory, "s.f64"), t.singular_values)
    write_f64(os.path.join(directory, "v.f64"), t.v)
    write_json(os.path.join(directory, "manifest.json"), {"n": t.n, "r": t.r, "nnz": t.nnz})


def load_tsvd(directory: str) -> TsvdResult:
    manifest = read_json(os.path.join(directory, "manifest.json"))
    try:
        n, r = int(manifest["n"]), int(manifest["r"])
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"Malformed TSVD manifest: {e}")
    return TsvdResult(
        u=read_f64(os.path.join(directory, "u.f64"), (n, r)),
        singular_values=read_f64(os.path.join(directory, "s.f64"), (r,)),
        v=read_f64(os.path.join(directory, "v.f64"), (n, r)),
    )
