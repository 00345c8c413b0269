"""
Equal-budget comparison of a Chord factor chain against truncated SVD.
"""

import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .chord import build_pattern
from .config import SfConfig
from .factorization import (
    FactorChain,
    FitReport,
    TsvdResult,
    fit,
    fro_err,
    rank_for_budget,
    reconstruct,
    tsvd,
)
from .factorization.chain import as_dense

logger = logging.getLogger(__name__)

TIE_RELATIVE = 1e-9
EXACT_RELATIVE = 1e-6


@dataclass
class RunReport:
    command: str
    config: Dict[str, Any]
    seed: int
    n: int
    nnz_sf: int
    nnz_tsvd: int
    rank_r: int
    fro_err_sf: float
    fro_err_tsvd: float
    winner: str
    wall_time_s: float
    name: str = ""
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return asdict(self)


def pick_winner(err_sf: float, err_tsvd: float, norm: float) -> str:
    """'sf', 'tsvd' or 'tie' by relative F-error."""
    scale = norm if norm > 0 else 1.0
    rel_sf, rel_tsvd = err_sf / scale, err_tsvd / scale
    if abs(rel_sf - rel_tsvd) <= TIE_RELATIVE or (rel_sf <= EXACT_RELATIVE and rel_tsvd <= EXACT_RELATIVE):
        return "tie"
    return "sf" if rel_sf < rel_tsvd else "tsvd"


def compare_matrix(x: np.ndarray, mode: str, cfg: SfConfig, command: str = "compare",
                   name: str = "") -> Tuple[RunReport, FactorChain, FitReport, TsvdResult]:
    x = as_dense(x, "input matrix")
    started = time.perf_counter()
    pattern = build_pattern(x.shape[0], mode)

    chain, fit_report = fit(x, pattern, cfg)
    r = rank_for_budget(pattern.n, chain.nnz)
    baseline = tsvd(x, r, seed=cfg.seed)
    err_tsvd = fro_err(x, reconstruct(baseline))
    err_sf = fit_report.final_fro_err

    if baseline.nnz < chain.nnz:
        logger.warning("TSVD capped at full rank: %d non-zeros against %d", baseline.nnz, chain.nnz)
    report = RunReport(
        command=command,
        config={"mode": mode, **cfg.to_dict()},
        seed=cfg.seed,
        n=pattern.n,
        nnz_sf=chain.nnz,
        nnz_tsvd=baseline.nnz,
        rank_r=r,
        fro_err_sf=err_sf,
        fro_err_tsvd=err_tsvd,
        winner=pick_winner(err_sf, err_tsvd, float(np.linalg.norm(x))),
        wall_time_s=time.perf_counter() - started,
        name=name,
        extra={"iterations_run": fit_report.iterations_run, "stop_reason": fit_report.stop_reason},
    )
    logger.info("%s: SF %.4e vs TSVD(r=%d) %.4e -> %s", name or "matrix", err_sf, r, err_tsvd, report.winner)
    return report, chain, fit_report, baseline


def benchmark_row(report: RunReport) -> Dict[str, Any]:
    return {
        "name": report.name,
        "n": report.n,
        "nnz_sf": report.nnz_sf,
        "nnz_tsvd": report.nnz_tsvd,
        "fro_err_tsvd": report.fro_err_tsvd,
        "fro_err_sf": report.fro_err_sf,
        "winner": report.winner,
    }


def summarize(rows, key: str = "winner") -> Dict[str, int]:
    counts: Dict[str, int] = {}
    for row in rows:
        counts[row[key]] = counts.get(row[key], 0) + 1
    return counts


def tsvd_for_budget(x: np.ndarray, budget: Optional[int] = None, rank: Optional[int] = None,
                    seed: int = 0) -> Tuple[TsvdResult, float]:
    x = as_dense(x, "input matrix")
    r = rank if rank is not None else rank_for_budget(x.shape[0], budget)
    result = tsvd(x, r, seed=seed)
    return result, fro_err(x, reconstruct(result))
