"""
Synthetic long-sequence tasks: the Adding problem and Temporal Order.

Datasets are stored column-wise in numpy arrays; single instances are only
materialized on request.
"""

import logging
import os
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from ..errors import ConfigurationError, InputError, InvalidDimensionError, LengthMismatchError
from ..utils import read_json, write_json

logger = logging.getLogger(__name__)

VOCAB = ('a', 'b', 'c', 'd', 'X', 'Y')
NOISE_TOKENS = 4
SIGNAL_TOKENS = {'X': 4, 'Y': 5}
ADDING_TOLERANCE = 0.04


@dataclass
class AddingInstance:
    pairs: np.ndarray  # (N, 2): a_i, b_i
    y: float

    @property
    def positions(self) -> Tuple[int, int]:
        t1, t2 = np.flatnonzero(self.pairs[:, 1] == 1)
        return int(t1), int(t2)


@dataclass
class OrderInstance:
    tokens: np.ndarray  # (N,) indices into VOCAB
    label: int

    @property
    def symbols(self) -> str:
        return "".join(VOCAB[t] for t in self.tokens)


@dataclass
class AddingDataset:
    a: np.ndarray  # (count, N)
    b: np.ndarray  # (count, N), 0/1
    y: np.ndarray  # (count,)
    task = 'adding'

    @property
    def n(self) -> int:
        return int(self.a.shape[1])

    def __len__(self) -> int:
        return int(self.a.shape[0])

    def features(self, idx=slice(None)) -> np.ndarray:
        """(count, N, 2) float inputs."""
        return np.stack([self.a[idx], self.b[idx].astype(np.float64)], axis=-1)

    def targets(self, idx=slice(None)) -> np.ndarray:
        return self.y[idx]

    def instance(self, k: int) -> AddingInstance:
        return AddingInstance(pairs=self.features(k), y=float(self.y[k]))


@dataclass
class OrderDataset:
    tokens: np.ndarray  # (count, N) int
    labels: np.ndarray  # (count,) int
    task = 'temporal_order'

    @property
    def n(self) -> int:
        return int(self.tokens.shape[1])

    def __len__(self) -> int:
        return int(self.tokens.shape[0])

    def features(self, idx=slice(None)) -> np.ndarray:
        return self.tokens[idx]

    def targets(self, idx=slice(None)) -> np.ndarray:
        return self.labels[idx]

    def instance(self, k: int) -> OrderInstance:
        return OrderInstance(tokens=self.tokens[k].copy(), label=int(self.labels[k]))


Dataset = Union[AddingDataset, OrderDataset]


def adding_target(pairs: Sequence[Sequence[float]]) -> float:
    """y = 0.5 + (a_t1 + a_t2) / 4 over the two flagged positions."""
    pairs = np.asarray(pairs, dtype=np.float64)
    flagged = pairs[pairs[:, 1] == 1, 0]
    if flagged.size != 2:
        raise InvalidDimensionError(f"Expected exactly two flagged positions, got {flagged.size}")
    return float(0.5 + flagged.sum() / 4.0)


def order_label(tokens: Sequence[Union[int, str]]) -> int:
    """0-based class of the ordered signal pair: XX->0, XY->1, YX->2, YY->3."""
    ids = [VOCAB.index(t) if isinstance(t, str) else int(t) for t in tokens]
    signals = [t for t in ids if t >= NOISE_TOKENS]
    if len(signals) != 2:
        raise InvalidDimensionError(f"Expected exactly two signal symbols, got {len(signals)}")
    first, second = (s - NOISE_TOKENS for s in signals)
    return 2 * first + second


def _distinct_positions(rng: np.random.Generator, n: int, count: int) -> Tuple[np.ndarray, np.ndarray]:
    t1 = rng.integers(0, n, size=count)
    t2 = rng.integers(0, n - 1, size=count)
    t2 = t2 + (t2 >= t1)
    return t1, t2


def gen_adding(n: int, count: int, seed: int) -> AddingDataset:
    if n < 2:
        raise InvalidDimensionError(f"Sequence length must be >= 2, got {n}")
    rng = np.random.default_rng(seed)
    a = rng.uniform(-1.0, 1.0, size=(count, n))
    t1, t2 = _distinct_positions(rng, n, count)
    b = np.zeros((count, n), dtype=np.int64)
    rows = np.arange(count)
    b[rows, t1] = 1
    b[rows, t2] = 1
    y = 0.5 + (a[rows, t1] + a[rows, t2]) / 4.0
    return AddingDataset(a=a, b=b, y=y)


def gen_temporal_order(n: int, count: int, seed: int) -> OrderDataset:
    if n < 2:
        raise InvalidDimensionError(f"Sequence length must be >= 2, got {n}")
    rng = np.random.default_rng(seed)
    tokens = rng.integers(0, NOISE_TOKENS, size=(count, n))
    t1, t2 = _distinct_positions(rng, n, count)
    first, second = np.minimum(t1, t2), np.maximum(t1, t2)
    signals = rng.integers(0, 2, size=(count, 2))
    rows = np.arange(count)
    tokens[rows, first] = NOISE_TOKENS + signals[:, 0]
    tokens[rows, second] = NOISE_TOKENS + signals[:, 1]
    labels = 2 * signals[:, 0] + signals[:, 1]
    return OrderDataset(tokens=tokens, labels=labels)


GENERATORS = {
    'adding': gen_adding,
    'temporal_order': gen_temporal_order,
}


def generate(task: str, n: int, count: int, seed: int) -> Dataset:
    try:
        generator = GENERATORS[task]
    except KeyError:
        raise ConfigurationError(f"Unknown task '{task}'. Available: {', '.join(GENERATORS)}")
    logger.debug("Generating %d %s sequences of length %d (seed %d)", count, task, n, seed)
    return generator(n, count, seed)


def _csv_path(prefix: str) -> str:
    return prefix if prefix.endswith(".csv") else prefix + ".csv"


def write_dataset(dataset: Dataset, path: str) -> str:
    """Write ``<path>.csv`` plus ``<path>.json`` manifest; returns the CSV path."""
    csv_path = _csv_path(path)
    os.makedirs(os.path.dirname(os.path.abspath(csv_path)), exist_ok=True)
    n = dataset.n
    if dataset.task == 'adding':
        header = ",".join(f"a_{i},b_{i}" for i in range(1, n + 1)) + ",y"
        table = np.empty((len(dataset), 2 * n + 1))
        table[:, 0:2 * n:2] = dataset.a
        table[:, 1:2 * n:2] = dataset.b
        table[:, -1] = dataset.y
        fmt = ["%.17g", "%d"] * n + ["%.17g"]
    else:
        header = ",".join(f"tok_{i}" for i in range(1, n + 1)) + ",label"
        table = np.column_stack([dataset.tokens, dataset.labels])
        fmt = "%d"
    np.savetxt(csv_path, table, fmt=fmt, delimiter=",", header=header, comments="")
    write_json(csv_path[:-4] + ".json", {
        "task": dataset.task,
        "n": n,
        "count": len(dataset),
        "columns": 2 * n + 1 if dataset.task == 'adding' else n + 1,
        "vocab": list(VOCAB) if dataset.task == 'temporal_order' else None,
    })
    return csv_path


def read_dataset(path: str) -> Dataset:
    csv_path = _csv_path(path)
    manifest = read_json(csv_path[:-4] + ".json")
    task = manifest.get("task")
    if task not in GENERATORS:
        raise InputError(f"Unknown task '{task}' in dataset manifest")
    try:
        table = np.loadtxt(csv_path, delimiter=",", skiprows=1, ndmin=2)
    except FileNotFoundError:
        raise InputError(f"Dataset '{csv_path}' does not exist")
    except ValueError as e:
        raise LengthMismatchError(f"Dataset '{csv_path}' has rows of different lengths: {e}")

    n = int(manifest["n"])
    width = 2 * n + 1 if task == 'adding' else n + 1
    if table.shape[1] != width:
        raise LengthMismatchError(f"Dataset rows hold {table.shape[1]} columns, expected {width} for N={n}")
    if task == 'adding':
        return AddingDataset(a=table[:, 0:2 * n:2].copy(), b=table[:, 1:2 * n:2].astype(np.int64),
                             y=table[:, -1].copy())
    return OrderDataset(tokens=table[:, :n].astype(np.int64), labels=table[:, -1].astype(np.int64))


def dataset_from_instances(instances: Sequence[Union[AddingInstance, OrderInstance]]) -> Dataset:
    """Stack instances; all must share one length."""
    if not instances:
        raise InvalidDimensionError("No instances given")
    lengths = {len(x.pairs) if isinstance(x, AddingInstance) else len(x.tokens) for x in instances}
    if len(lengths) != 1:
        raise LengthMismatchError(f"Mixed sequence lengths: {sorted(lengths)}")
    if isinstance(instances[0], AddingInstance):
        pairs = np.stack([x.pairs for x in instances])
        return AddingDataset(a=pairs[:, :, 0], b=pairs[:, :, 1].astype(np.int64),
                             y=np.array([x.y for x in instances]))
    return OrderDataset(tokens=np.stack([x.tokens for x in instances]).astype(np.int64),
                        labels=np.array([x.label for x in instances], dtype=np.int64))
