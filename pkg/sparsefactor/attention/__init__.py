"""
Parametric sparse-factorization attention (PSF-Attn).
"""

from .model import (
    ForwardTrace,
    PsfAttnModel,
    as_grid,
    attention_map,
    attention_row,
    build_factors,
    forward,
    load_model,
    save_model,
)
from .tasks import TASKS, BaseTask, get_task
from .training import EpochMetrics, TrainRun, TrainSummary, evaluate, save_metrics, train, train_once

__all__ = [
    'ForwardTrace', 'PsfAttnModel', 'as_grid', 'attention_map', 'attention_row',
    'build_factors', 'forward', 'load_model', 'save_model', 'TASKS', 'BaseTask',
    'get_task', 'EpochMetrics', 'TrainRun', 'TrainSummary', 'evaluate',
    'save_metrics', 'train', 'train_once',
]
