"""
Task heads for PSF-Attn: output width, loss and the correctness rule.
"""

from abc import ABC, abstractmethod
from typing import Tuple

import numpy as np

from ..data.sequences import ADDING_TOLERANCE, VOCAB
from ..errors import ConfigurationError, InvalidDimensionError


class BaseTask(ABC):
    name = ""

    @property
    @abstractmethod
    def n_outputs(self) -> int:
        """Width of the head output."""

    @property
    @abstractmethod
    def input_kind(self) -> str:
        """'features' (float pairs) or 'tokens' (vocabulary indices)."""

    @abstractmethod
    def loss_and_grad(self, outputs: np.ndarray, targets: np.ndarray) -> Tuple[float, np.ndarray]:
        """Mean loss over the batch and dLoss/dOutputs."""

    @abstractmethod
    def correct(self, outputs: np.ndarray, targets: np.ndarray) -> np.ndarray:
        """Boolean mask of correct predictions."""

    def _check(self, outputs: np.ndarray, targets: np.ndarray) -> None:
        if outputs.ndim != 2 or outputs.shape[1] != self.n_outputs or outputs.shape[0] != len(targets):
            raise InvalidDimensionError(
                f"{self.name}: outputs {outputs.shape} do not fit {len(targets)} targets"
            )


class AddingTask(BaseTask):
    name = 'adding'

    @property
    def n_outputs(self) -> int:
        return 1

    @property
    def input_kind(self) -> str:
        return 'features'

    @property
    def in_dim(self) -> int:
        return 2

    def loss_and_grad(self, outputs, targets):
        self._check(outputs, targets)
        diff = outputs[:, 0] - targets
        loss = float(np.mean(diff * diff))
        grad = (2.0 / len(targets)) * diff[:, None]
        return loss, grad

    def correct(self, outputs, targets):
        self._check(outputs, targets)
        return np.abs(outputs[:, 0] - targets) < ADDING_TOLERANCE


class TemporalOrderTask(BaseTask):
    name = 'temporal_order'

    @property
    def n_outputs(self) -> int:
        return 4

    @property
    def input_kind(self) -> str:
        return 'tokens'

    @property
    def vocab_size(self) -> int:
        return len(VOCAB)

    def loss_and_grad(self, outputs, targets):
        # softmax cross-entropy
        self._check(outputs, targets)
        targets = np.asarray(targets, dtype=np.int64)
        shifted = outputs - outputs.max(axis=1, keepdims=True)
        log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
        rows = np.arange(len(targets))
        loss = float(-np.mean(log_probs[rows, targets]))
        grad = np.exp(log_probs)
        grad[rows, targets] -= 1.0
        return loss, grad / len(targets)

    def correct(self, outputs, targets):
        self._check(outputs, targets)
        return np.argmax(outputs, axis=1) == np.asarray(targets)


TASKS = {
    'adding': AddingTask,
    'temporal_order': TemporalOrderTask,
}

TASK_ALIASES = {'order': 'temporal_order'}


def get_task(name: str) -> BaseTask:
    name = TASK_ALIASES.get(name, name)
    if name not in TASKS:
        raise ConfigurationError(f"Unknown task '{name}'. Available: {', '.join(TASKS)}")
    return TASKS[name]()
