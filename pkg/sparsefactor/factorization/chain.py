"""
Chord-sparse factor matrices and the chain algebra.

Dense matrices are plain 2-D float64 ``numpy`` arrays. The product of a chain
is always X_hat = W(1) @ W(2) @ ... @ W(M); applied to a dense right operand
it folds right to left.
"""

import os
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
import scipy.sparse as sps

from ..chord import SparsityPattern, pattern_from_json
from ..errors import InputError, InvalidDimensionError, NumericFaultError
from ..utils import read_f64, read_json, write_f64, write_json

PRODUCT_ORDER = "left_to_right"


def as_dense(x, name: str = "matrix") -> np.ndarray:
    """Validate and coerce to a finite 2-D float64 array."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise InvalidDimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NumericFaultError(f"{name} contains NaN or Inf")
    return arr


@dataclass(eq=False)
class SparseSquareMatrix:
    """A pattern plus one value per stored entry (CSR order)."""
    pattern: SparsityPattern
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if self.values.size != self.pattern.nnz:
            raise InvalidDimensionError(
                f"Expected {self.pattern.nnz} values, got {self.values.size}"
            )
        if not np.all(np.isfinite(self.values)):
            raise NumericFaultError("Factor values contain NaN or Inf")

    @property
    def n(self) -> int:
        return self.pattern.n

    def to_csr(self) -> sps.csr_matrix:
        # explicit zeros stay stored
        return sps.csr_matrix(
            (self.values, self.pattern.indices, self.pattern.indptr),
            shape=(self.n, self.n),
        )

    def copy(self) -> "SparseSquareMatrix":
        return SparseSquareMatrix(self.pattern, self.values.copy())


@dataclass(eq=False)
class FactorChain:
    """Ordered factors W(1)..W(M) sharing one pattern."""
    factors: List[SparseSquareMatrix]

    def __post_init__(self):
        if not self.factors:
            raise InvalidDimensionError("A factor chain needs at least one factor")
        first = self.factors[0].pattern
        for w in self.factors[1:]:
            if not w.pattern.same_as(first):
                raise InvalidDimensionError("All factors of a chain must share one pattern")

    @property
    def pattern(self) -> SparsityPattern:
        return self.factors[0].pattern

    @property
    def m(self) -> int:
        return len(self.factors)

    @property
    def n(self) -> int:
        return self.pattern.n

    @property
    def nnz(self) -> int:
        return self.m * self.pattern.nnz

    def values(self) -> List[np.ndarray]:
        return [w.values for w in self.factors]

    def copy(self) -> "FactorChain":
        return FactorChain([w.copy() for w in self.factors])

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(w.values)) for w in self.factors)


def identity_factor(pattern: SparsityPattern) -> SparseSquareMatrix:
    """Diagonal entries 1, other stored entries explicit zeros."""
    values = np.zeros(pattern.nnz)
    values[pattern.slot_to_flat[:, 0]] = 1.0
    return SparseSquareMatrix(pattern, values)


def chain_from_values(pattern: SparsityPattern, values: Sequence[np.ndarray]) -> FactorChain:
    return FactorChain([SparseSquareMatrix(pattern, v) for v in values])


def densify(w: SparseSquareMatrix) -> np.ndarray:
    dense = np.zeros((w.n, w.n))
    dense[w.pattern.row_index, w.pattern.indices] = w.values
    return dense


def spmm_dense(w: SparseSquareMatrix, d: np.ndarray) -> np.ndarray:
    """Exact W @ D in O(nnz(W) * cols(D))."""
    d = np.asarray(d, dtype=np.float64)
    if d.ndim == 1:
        d = d[:, None]
    if d.shape[0] != w.n:
        raise InvalidDimensionError(
            f"Cannot multiply {w.n}x{w.n} factor with {d.shape[0]}x{d.shape[1]} matrix"
        )
    return np.asarray(w.to_csr() @ d)


def chain_apply(chain: FactorChain, d: np.ndarray) -> np.ndarray:
    """X_hat @ D without materializing X_hat (folds right to left)."""
    out = np.asarray(d, dtype=np.float64)
    for w in reversed(chain.factors):
        out = spmm_dense(w, out)
    return out


def chain_materialize(chain: FactorChain) -> np.ndarray:
    """X_hat = W(1) @ ... @ W(M) as a dense matrix."""
    out = densify(chain.factors[-1])
    for w in reversed(chain.factors[:-1]):
        out = spmm_dense(w, out)
    return out


def fro_err(x: np.ndarray, xhat: np.ndarray) -> float:
    """Frobenius norm of X - X_hat (not squared)."""
    x = np.asarray(x, dtype=np.float64)
    xhat = np.asarray(xhat, dtype=np.float64)
    if x.shape != xhat.shape:
        raise InvalidDimensionError(f"Shape mismatch: {x.shape} vs {xhat.shape}")
    return float(np.sqrt(np.sum((x - xhat) ** 2)))


def row_of_product(chain: FactorChain, i: int) -> np.ndarray:
    """Row i of X_hat as e_i^T W(1) W(2) ... W(M), vector-matrix products only."""
    if not 0 <= i < chain.n:
        raise InvalidDimensionError(f"Row {i} out of range for N={chain.n}")
    first = chain.factors[0]
    pattern = first.pattern
    row = np.zeros(chain.n)
    lo, hi = pattern.indptr[i], pattern.indptr[i + 1]
    row[pattern.indices[lo:hi]] = first.values[lo:hi]
    for w in chain.factors[1:]:
        row = np.asarray(w.to_csr().T @ row).reshape(-1)
    return row


def save_chain(chain: FactorChain, directory: str) -> None:
    """Write pattern.json, manifest.json and factor_<m>.f64 files."""
    os.makedirs(directory, exist_ok=True)
    write_json(os.path.join(directory, "pattern.json"), chain.pattern.to_json())
    for m, w in enumerate(chain.factors, 1):
        write_f64(os.path.join(directory, f"factor_{m}.f64"), w.values)
    write_json(os.path.join(directory, "manifest.json"), {
        "m": chain.m,
        "n": chain.n,
        "mode": chain.pattern.mode,
        "order": PRODUCT_ORDER,
    })


def load_chain(directory: str) -> FactorChain:
    manifest = read_json(os.path.join(directory, "manifest.json"))
    if manifest.get("order") != PRODUCT_ORDER:
        raise InputError(f"Unsupported product order '{manifest.get('order')}'")
    pattern = pattern_from_json(read_json(os.path.join(directory, "pattern.json")))
    if pattern.n != manifest.get("n") or pattern.mode != manifest.get("mode"):
        raise InputError("Chain manifest does not match its pattern")
    values = [
        read_f64(os.path.join(directory, f"factor_{m}.f64"), (pattern.nnz,))
        for m in range(1, int(manifest["m"]) + 1)
    ]
    try:
        return chain_from_values(pattern, values)
    except NumericFaultError:
        raise NumericFaultError(f"Chain in '{directory}' holds non-finite values")
