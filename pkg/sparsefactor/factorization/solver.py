"""
Non-parametric sparse factorization: minimize ||X - W(1)...W(M)||_F^2 over
the stored values of a Chord factor chain.
"""

import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from ..chord import SparsityPattern
from ..config import SfConfig
from ..errors import InvalidDimensionError, NumericFaultError
from ..nn.adam import AdamState
from ..utils import write_json
from .chain import (
    FactorChain,
    as_dense,
    chain_from_values,
    densify,
    spmm_dense,
)

logger = logging.getLogger(__name__)

INIT_SPREAD = 1e-2


@dataclass
class FitReport:
    final_fro_err: float
    loss_history: List[float]
    iterations_run: int
    nnz_total: int
    wall_time_s: float
    initial_loss: float = 0.0
    stop_reason: str = "max_iters"
    final_learning_rate: float = 0.0
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return asdict(self)


def init_chain(pattern: SparsityPattern, m: int, seed: int) -> FactorChain:
    """Values i.i.d. uniform in [1/d, 1/d + 0.01], d the degree of the entry's row."""
    if m < 1:
        raise InvalidDimensionError(f"Factor count must be >= 1, got {m}")
    rng = np.random.default_rng(seed)
    base = 1.0 / pattern.degrees[pattern.row_index]
    values = [base + rng.uniform(0.0, INIT_SPREAD, size=pattern.nnz) for _ in range(m)]
    return chain_from_values(pattern, values)


def _prefix_products(dense: List[np.ndarray]) -> List[np.ndarray]:
    # prefix[m] = W(1)...W(m); prefix[0] is the identity (None)
    prefix: List[Any] = [None, dense[0]]
    for d in dense[1:]:
        prefix.append(prefix[-1] @ d)
    return prefix


def _suffix_products(chain: FactorChain, dense: List[np.ndarray]) -> List[np.ndarray]:
    # suffix[m] = W(m)...W(M) (1-based m); suffix[M+1] is the identity (None)
    m_total = chain.m
    suffix: List[Any] = [None] * (m_total + 2)
    suffix[m_total] = dense[-1]
    for m in range(m_total - 1, 0, -1):
        suffix[m] = spmm_dense(chain.factors[m - 1], suffix[m + 1])
    return suffix


def loss_and_grad(chain: FactorChain, x: np.ndarray) -> Tuple[float, List[np.ndarray]]:
    """Squared F-norm loss and its gradient per factor (stored entries only).

    grad W(m) = mask(A^T @ 2(X_hat - X) @ B^T) with A = W(1)...W(m-1) and
    B = W(m+1)...W(M).
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (chain.n, chain.n):
        raise InvalidDimensionError(f"Target is {x.shape}, chain is {chain.n}x{chain.n}")
    if not chain.is_finite():
        raise NumericFaultError("Factor chain holds NaN or Inf values")

    pattern = chain.pattern
    rows, cols = pattern.row_index, pattern.indices
    dense = [densify(w) for w in chain.factors]
    prefix = _prefix_products(dense)
    suffix = _suffix_products(chain, dense)

    residual = prefix[chain.m] - x
    loss = float(np.sum(residual * residual))
    if not np.isfinite(loss):
        raise NumericFaultError("Loss is not finite")
    upstream = 2.0 * residual

    grads = []
    for m in range(1, chain.m + 1):
        left = upstream if prefix[m - 1] is None else prefix[m - 1].T @ upstream
        right = suffix[m + 1]
        if right is None:
            grads.append(left[rows, cols].copy())
        else:
            # (left @ right^T)[i, j] = left[i, :] . right[j, :]
            grads.append(np.einsum('ek,ek->e', left[rows], right[cols]))
    return loss, grads


def fit(x: np.ndarray, pattern: SparsityPattern, cfg: SfConfig) -> Tuple[FactorChain, FitReport]:
    """Fit a chain to X with full-batch Adam; returns the best chain seen."""
    x = as_dense(x, "target matrix")
    if x.shape[0] != x.shape[1]:
        raise InvalidDimensionError(f"Target must be square, got {x.shape}")
    if x.shape[0] != pattern.n:
        raise InvalidDimensionError(f"Target is {x.shape[0]}x{x.shape[0]} but pattern has N={pattern.n}")

    started = time.perf_counter()
    m_factors = cfg.factors_for(pattern.n)
    chain = init_chain(pattern, m_factors, cfg.seed)
    params = {f"factor_{m}": w.values for m, w in enumerate(chain.factors, 1)}
    state = AdamState(lr=cfg.learning_rate, beta1=cfg.beta1, beta2=cfg.beta2, epsilon=cfg.epsilon)

    best_loss = np.inf
    best_chain = chain.copy()
    history: List[float] = []
    initial_loss = None
    last_plateau = 0
    stop_reason = "max_iters"
    iterations = 0

    logger.info("Fitting N=%d M=%d nnz=%d", pattern.n, m_factors, chain.nnz)
    for it in range(1, cfg.max_iters + 1):
        try:
            loss, grads = loss_and_grad(chain, x)
        except NumericFaultError as e:
            raise NumericFaultError(f"Iteration {it}: {e}", last_valid=best_chain)
        iterations = it
        if initial_loss is None:
            initial_loss = loss
        if loss < best_loss:
            best_loss = loss
            best_chain = chain.copy()
        history.append(best_loss)

        if it % cfg.log_every == 0:
            logger.debug("iter %d loss %.6e lr %.2e", it, best_loss, state.lr)
        if best_loss == 0.0:
            stop_reason = "exact"
            break

        window = cfg.stop_window
        if it - last_plateau > window:
            before = history[-window - 1]
            if before - best_loss < cfg.stop_rel_improvement * before:
                next_lr = state.lr * cfg.plateau_factor
                if cfg.plateau_factor < 1.0 and next_lr >= cfg.min_learning_rate:
                    logger.debug("Plateau at iter %d, lr %.2e -> %.2e", it, state.lr, next_lr)
                    state.lr = next_lr
                    last_plateau = it
                else:
                    stop_reason = "converged"
                    break

        state.step(params, {f"factor_{m}": g for m, g in enumerate(grads, 1)})

    report = FitReport(
        final_fro_err=float(np.sqrt(best_loss)),
        loss_history=history,
        iterations_run=iterations,
        nnz_total=best_chain.nnz,
        wall_time_s=time.perf_counter() - started,
        initial_loss=float(initial_loss),
        stop_reason=stop_reason,
        final_learning_rate=state.lr,
    )
    logger.info(
        "Fit finished after %d iterations (%s): F-error %.6e",
        iterations, stop_reason, report.final_fro_err,
    )
    return best_chain, report


def save_report(report: FitReport, path: str) -> None:
    write_json(path, report.to_json())
