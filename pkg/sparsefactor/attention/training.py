"""
End-to-end training and evaluation of PSF-Attn on the synthetic tasks.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..config import ModelConfig, TrainConfig
from ..data.sequences import Dataset
from ..errors import ConfigurationError, LengthMismatchError, NumericFaultError
from ..nn import AdamState
from ..utils import write_json
from .model import PsfAttnModel
from .tasks import TASK_ALIASES

logger = logging.getLogger(__name__)

EVAL_BATCH = 256


@dataclass
class EpochMetrics:
    epoch: int
    train_loss: float
    eval_accuracy: float
    wall_time_s: float


@dataclass
class TrainRun:
    seed: int
    epochs: List[EpochMetrics] = field(default_factory=list)

    @property
    def final_accuracy(self) -> float:
        return self.epochs[-1].eval_accuracy if self.epochs else 0.0

    def to_json(self) -> Dict[str, Any]:
        return {"seed": self.seed, "epochs": [asdict(e) for e in self.epochs]}


@dataclass
class TrainSummary:
    runs: List[TrainRun]

    @property
    def accuracies(self) -> np.ndarray:
        return np.array([r.final_accuracy for r in self.runs])

    def to_json(self) -> Dict[str, Any]:
        acc = self.accuracies
        return {
            "runs": [r.to_json() for r in self.runs],
            "final_accuracy_mean": float(acc.mean()),
            "final_accuracy_std": float(acc.std()),
        }


def _check_dataset(task: str, dataset: Dataset, n: Optional[int] = None) -> None:
    task = TASK_ALIASES.get(task, task)
    if dataset.task != task:
        raise ConfigurationError(f"Dataset holds '{dataset.task}' sequences, task is '{task}'")
    if len(dataset) == 0:
        raise ConfigurationError("Dataset is empty")
    if n is not None and dataset.n != n:
        raise LengthMismatchError(f"Dataset sequences have length {dataset.n}, model expects {n}")


def _correct_count(model: PsfAttnModel, dataset: Dataset, lo: int, hi: int) -> int:
    count = 0
    for start in range(lo, hi, EVAL_BATCH):
        idx = slice(start, min(start + EVAL_BATCH, hi))
        outputs = model.predict(dataset.features(idx))
        count += int(model.task.correct(outputs, dataset.targets(idx)).sum())
    return count


def evaluate(model: PsfAttnModel, dataset: Dataset, threads: int = 1) -> float:
    """Fraction of correct predictions; shards are summed as integer counts."""
    _check_dataset(model.task.name, dataset, model.n)
    total = len(dataset)
    if threads <= 1 or total <= EVAL_BATCH:
        return _correct_count(model, dataset, 0, total) / total

    bounds = np.linspace(0, total, threads + 1).astype(int)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        counts = pool.map(lambda lh: _correct_count(model, dataset, *lh), zip(bounds[:-1], bounds[1:]))
        return sum(counts) / total


def train_once(task: str, dataset: Dataset, cfg: TrainConfig, model_cfg: Optional[ModelConfig] = None,
               eval_dataset: Optional[Dataset] = None, seed: Optional[int] = None) -> Tuple[PsfAttnModel, TrainRun]:
    seed = cfg.seed if seed is None else seed
    _check_dataset(task, dataset)
    eval_dataset = eval_dataset if eval_dataset is not None else dataset
    _check_dataset(task, eval_dataset, dataset.n)

    model = PsfAttnModel.create(dataset.n, task, model_cfg, seed=seed)
    params = model.parameters()
    state = AdamState(lr=cfg.learning_rate)
    rng = np.random.default_rng(seed)
    run = TrainRun(seed=seed)
    checkpoint = model.snapshot()
    started = time.perf_counter()
    total = len(dataset)

    logger.info("Training %s: N=%d, %d sequences, %d epochs (seed %d)",
                model.task.name, dataset.n, total, cfg.epochs, seed)
    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(total)
        losses = []
        for step, start in enumerate(range(0, total, cfg.batch_size), 1):
            idx = order[start:start + cfg.batch_size]
            try:
                loss, grads = model.loss_and_grad(dataset.features(idx), dataset.targets(idx))
            except NumericFaultError as e:
                model.restore(checkpoint)
                raise NumericFaultError(f"Epoch {epoch}, step {step}: {e}", last_valid=model)
            if not np.isfinite(loss) or not all(np.all(np.isfinite(g)) for g in grads.values()):
                model.restore(checkpoint)
                raise NumericFaultError(f"Epoch {epoch}, step {step}: non-finite loss or gradient",
                                        last_valid=model)
            state.step(params, grads)
            losses.append(loss)
            if step % cfg.log_every == 0:
                logger.debug("epoch %d step %d loss %.6f", epoch, step, loss)

        accuracy = evaluate(model, eval_dataset, cfg.threads)
        metrics = EpochMetrics(
            epoch=epoch,
            train_loss=float(np.mean(losses)),
            eval_accuracy=float(accuracy),
            wall_time_s=time.perf_counter() - started,
        )
        run.epochs.append(metrics)
        checkpoint = model.snapshot()
        logger.info("epoch %d: loss %.6f, accuracy %.4f", epoch, metrics.train_loss, accuracy)
    return model, run


def train(task: str, dataset: Dataset, cfg: Optional[TrainConfig] = None,
          model_cfg: Optional[ModelConfig] = None,
          eval_dataset: Optional[Dataset] = None) -> Tuple[PsfAttnModel, TrainSummary]:
    """Train ``cfg.repeats`` models with seeds seed, seed+1, ...; returns the best one."""
    cfg = cfg or TrainConfig()
    best_model, runs = None, []
    for r in range(cfg.repeats):
        model, run = train_once(task, dataset, cfg, model_cfg, eval_dataset, seed=cfg.seed + r)
        runs.append(run)
        if best_model is None or run.final_accuracy > max(x.final_accuracy for x in runs[:-1]):
            best_model = model
    summary = TrainSummary(runs)
    if cfg.repeats > 1:
        acc = summary.accuracies
        logger.info("Final accuracy over %d seeds: %.4f +/- %.4f", cfg.repeats, acc.mean(), acc.std())
    return best_model, summary


def save_metrics(summary: TrainSummary, path: str) -> None:
    write_json(path, summary.to_json())
