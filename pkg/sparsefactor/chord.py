"""
Chord sparsity patterns.

Node i of a circular graph over N nodes links to itself and to
(i + 2^k) mod N. The links of node i are the stored columns of row i in every
factorizing matrix, so all factors share one pattern.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, NamedTuple, Tuple

import numpy as np
import scipy.sparse as sps

from .config import PATTERN_MODES
from .errors import InputError, InvalidDimensionError

logger = logging.getLogger(__name__)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SparsityPattern:
    """Stored positions of a Chord-structured N x N matrix.

    ``indptr``/``indices`` give the CSR layout (columns ascending per row);
    flat value arrays of SparseSquareMatrix follow this order.
    ``slot_columns[i, s]`` gives the column of slot s in row i, with slot 0 the
    diagonal and slot s >= 1 the offset ``offsets[s]``. ``slot_to_flat[i, s]``
    is the position of that entry in the CSR order.
    """
    n: int
    k_exp: int
    mode: str
    offsets: Tuple[int, ...]
    indptr: np.ndarray
    indices: np.ndarray
    slot_columns: np.ndarray
    slot_to_flat: np.ndarray

    @property
    def degree(self) -> int:
        return len(self.offsets)

    @property
    def nnz(self) -> int:
        return int(self.indptr[-1])

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def rows(self) -> List[List[int]]:
        return [self.row(i).tolist() for i in range(self.n)]

    @property
    def row_index(self) -> np.ndarray:
        """Row of every stored entry, in CSR order."""
        return np.repeat(np.arange(self.n), self.degrees)

    def row(self, i: int) -> np.ndarray:
        if not 0 <= i < self.n:
            raise InvalidDimensionError(f"Row {i} out of range for N={self.n}")
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def same_as(self, other: "SparsityPattern") -> bool:
        return (
            self is other
            or (self.n == other.n and self.mode == other.mode
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.indptr, other.indptr))
        )

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "k_exp": self.k_exp,
            "mode": self.mode,
            "rows": self.rows,
        }


class NnzAccount(NamedTuple):
    per_factor: int
    total: int


def chord_offsets(n: int, mode: str) -> Tuple[int, ...]:
    """Slot offsets in slot order: 0 (diagonal), then 2^k mod N, deduplicated."""
    k_exp = math.ceil(math.log2(n))
    top = k_exp - 1 if mode == "paper_literal" else k_exp
    offsets: List[int] = [0]
    for k in range(top):
        off = (2 ** k) % n
        if off not in offsets:
            offsets.append(off)
    return tuple(offsets)


def build_pattern(n: int, mode: str = "full_coverage") -> SparsityPattern:
    """Build the Chord pattern for an N x N matrix.

    paper_literal uses k = 0..K-2 (row degree K); full_coverage uses
    k = 0..K-1 (row degree K+1), with K = ceil(log2 N).
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidDimensionError(f"Pattern size must be an integer >= 2, got {n}")
    if mode not in PATTERN_MODES:
        raise InvalidDimensionError(f"Unknown pattern mode '{mode}'")
    n = int(n)

    offsets = chord_offsets(n, mode)
    degree = len(offsets)
    slot_columns = (np.arange(n)[:, None] + np.asarray(offsets)[None, :]) % n

    order = np.argsort(slot_columns, axis=1, kind="stable")
    indices = np.take_along_axis(slot_columns, order, axis=1)
    rank = np.empty_like(order)
    np.put_along_axis(rank, order, np.arange(degree)[None, :].repeat(n, axis=0), axis=1)
    slot_to_flat = np.arange(n)[:, None] * degree + rank

    return SparsityPattern(
        n=n,
        k_exp=math.ceil(math.log2(n)),
        mode=mode,
        offsets=offsets,
        indptr=_frozen(np.arange(n + 1, dtype=np.int64) * degree),
        indices=_frozen(indices.reshape(-1).astype(np.int64)),
        slot_columns=_frozen(slot_columns.astype(np.int64)),
        slot_to_flat=_frozen(slot_to_flat.astype(np.int64)),
    )


def adjacency(pattern: SparsityPattern) -> sps.csr_matrix:
    """0/1 adjacency matrix of the pattern."""
    data = np.ones(pattern.nnz, dtype=np.float64)
    return sps.csr_matrix(
        (data, pattern.indices.copy(), pattern.indptr.copy()),
        shape=(pattern.n, pattern.n),
    )


def structural_density(pattern: SparsityPattern, hops: int) -> float:
    """Fraction of structurally non-zero entries of the hops-fold Boolean product."""
    if hops < 1:
        raise InvalidDimensionError(f"hops must be >= 1, got {hops}")
    adj = adjacency(pattern)
    adj_t = adj.T.tocsr()
    reach = adj.toarray() > 0
    n2 = pattern.n * pattern.n
    for hop in range(1, hops):
        if reach.all():
            logger.debug("Pattern full after %d hops", hop)
            break
        # reach_{h+1} = reach_h @ A, evaluated as (A^T @ reach_h^T)^T
        reach = np.asarray(adj_t @ reach.T.astype(np.float64)).T > 0
    return float(np.count_nonzero(reach)) / n2


def nnz_accounting(pattern: SparsityPattern, m_factors: int) -> NnzAccount:
    """Stored entries per factor and for a chain of m_factors factors."""
    per_factor = int(pattern.degrees.sum())
    return NnzAccount(per_factor=per_factor, total=int(m_factors) * per_factor)


def pattern_from_json(payload: Dict[str, Any]) -> SparsityPattern:
    """Rebuild a pattern from its JSON form and check the stored rows agree."""
    try:
        n, mode = int(payload["n"]), payload["mode"]
        rows = payload.get("rows")
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"Malformed pattern JSON: {e}")
    pattern = build_pattern(n, mode)
    if rows is not None and [list(map(int, r)) for r in rows] != pattern.rows:
        raise InputError("Pattern JSON rows do not match the Chord protocol for its n and mode")
    return pattern
