"""
PSF-Attn: attention as a product of input-dependent Chord-sparse factors.

Each factor W(m) gets its stored values from an MLP applied to the rows of
the embedding E: slot s of f_m(E_i) lands at column slot_columns[i, s] of
row i. The block output is E_new = W(1) ... W(M) V with V = g(E).
"""

import logging
import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..chord import SparsityPattern, build_pattern, pattern_from_json
from ..config import ModelConfig, default_factor_count
from ..errors import InputError, LengthMismatchError, NumericFaultError
from ..factorization import FactorChain, chain_apply, row_of_product
from ..factorization.chain import chain_from_values
from ..nn import Mlp
from ..utils import read_f64, read_json, write_f64, write_json
from .tasks import BaseTask, get_task

logger = logging.getLogger(__name__)

# the last layer of every factor MLP starts near a row-averaging matrix
FACTOR_INIT_SCALE = 0.1

Params = Dict[str, np.ndarray]


@dataclass
class ForwardTrace:
    chain: FactorChain
    e: np.ndarray
    v: np.ndarray
    e_new: np.ndarray
    pooled: np.ndarray
    output: np.ndarray


@dataclass
class _BatchCache:
    inputs: np.ndarray
    flat: np.ndarray
    factor_values: List[np.ndarray]
    factor_traces: List[List[np.ndarray]]
    chain_inputs: List[np.ndarray]
    v_trace: List[np.ndarray]
    pooled: np.ndarray
    head_trace: List[np.ndarray]


def _glorot(rng: np.random.Generator, shape: Tuple[int, int]) -> np.ndarray:
    bound = np.sqrt(6.0 / sum(shape))
    return rng.uniform(-bound, bound, size=shape)


def _apply_slots(w: np.ndarray, y: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Batched W @ Y for slot-ordered values w (B, N, deg) and Y (B, N, dv)."""
    return np.einsum('bis,bisd->bid', w, y[:, cols, :])


class PsfAttnModel:
    """One PSF-Attn block with its input encoder and task head."""

    def __init__(self, pattern: SparsityPattern, task: BaseTask, cfg: ModelConfig,
                 factor_mlps: Sequence[Mlp], value_mlp: Mlp, head: Mlp,
                 table: Optional[np.ndarray] = None, lift: Optional[Mlp] = None,
                 position: Optional[np.ndarray] = None, seed: int = 0):
        self.pattern = pattern
        self.task = task
        self.cfg = cfg
        self.factor_mlps = list(factor_mlps)
        self.value_mlp = value_mlp
        self.head = head
        self.table = table
        self.lift = lift
        self.position = position
        self.seed = seed

    @classmethod
    def create(cls, n: int, task: str, cfg: Optional[ModelConfig] = None, seed: int = 0) -> "PsfAttnModel":
        cfg = cfg or ModelConfig()
        task_obj = get_task(task)
        pattern = build_pattern(n, cfg.mode)
        m = cfg.m_factors or default_factor_count(n)
        rng = np.random.default_rng(seed)

        def child() -> int:
            return int(rng.integers(0, 2 ** 31))

        table = lift = None
        if task_obj.input_kind == 'tokens':
            table = _glorot(np.random.default_rng(child()), (task_obj.vocab_size, cfg.d))
        else:
            lift = Mlp([task_obj.in_dim, cfg.d], seed=child())
        position = _glorot(np.random.default_rng(child()), (n, cfg.d)) if cfg.positional else None

        factor_mlps = []
        for _ in range(m):
            mlp = Mlp([cfg.d, cfg.hidden, pattern.degree], activation=cfg.activation, seed=child())
            last = mlp.n_layers - 1
            mlp.params[f"w{last}"] *= FACTOR_INIT_SCALE
            mlp.params[f"b{last}"][:] = 1.0 / pattern.degree
            factor_mlps.append(mlp)
        value_mlp = Mlp([cfg.d, cfg.hidden, cfg.value_dim], activation=cfg.activation, seed=child())
        head = Mlp([cfg.value_dim, task_obj.n_outputs], seed=child())

        logger.debug("Created PSF-Attn for %s: N=%d M=%d degree=%d d=%d",
                     task_obj.name, n, m, pattern.degree, cfg.d)
        return cls(pattern, task_obj, cfg, factor_mlps, value_mlp, head,
                   table=table, lift=lift, position=position, seed=seed)

    @property
    def n(self) -> int:
        return self.pattern.n

    @property
    def m(self) -> int:
        return len(self.factor_mlps)

    def parameters(self) -> Params:
        """Live references to every trainable array, keyed by a dotted name."""
        params: Params = {}
        if self.table is not None:
            params["encoder.table"] = self.table
        if self.lift is not None:
            params.update({f"encoder.{k}": v for k, v in self.lift.params.items()})
        if self.position is not None:
            params["position"] = self.position
        for m, mlp in enumerate(self.factor_mlps, 1):
            params.update({f"factor{m}.{k}": v for k, v in mlp.params.items()})
        params.update({f"value.{k}": v for k, v in self.value_mlp.params.items()})
        params.update({f"head.{k}": v for k, v in self.head.params.items()})
        return params

    def snapshot(self) -> Params:
        return {k: v.copy() for k, v in self.parameters().items()}

    def restore(self, snapshot: Params) -> None:
        for k, v in self.parameters().items():
            v[...] = snapshot[k]

    def _check_inputs(self, inputs: np.ndarray) -> np.ndarray:
        inputs = np.asarray(inputs)
        if self.task.input_kind == 'tokens':
            if inputs.ndim != 2:
                raise InputError(f"Token batch must be (B, N), got {inputs.shape}")
            inputs = inputs.astype(np.int64)
            if inputs.size and (inputs.min() < 0 or inputs.max() >= self.table.shape[0]):
                raise InputError("Token index outside the vocabulary")
        elif inputs.ndim != 3 or inputs.shape[2] != self.lift.in_dim:
            raise InputError(f"Feature batch must be (B, N, {self.lift.in_dim}), got {inputs.shape}")
        if inputs.shape[1] != self.n:
            raise LengthMismatchError(f"Sequence length {inputs.shape[1]} does not match N={self.n}")
        return inputs

    def encode(self, inputs: np.ndarray) -> np.ndarray:
        """(B, N, d) embeddings for a batch of token or feature sequences."""
        inputs = self._check_inputs(inputs)
        if self.table is not None:
            e = self.table[inputs]
        else:
            b = inputs.shape[0]
            e = self.lift.forward(inputs.reshape(b * self.n, -1)).reshape(b, self.n, -1)
        if self.position is not None:
            e = e + self.position
        return e

    def embed(self, sequence: np.ndarray) -> np.ndarray:
        """(N, d) embedding of one sequence."""
        return self.encode(np.asarray(sequence)[None])[0]

    def forward_batch(self, inputs: np.ndarray) -> Tuple[np.ndarray, _BatchCache]:
        inputs = self._check_inputs(inputs)
        e = self.encode(inputs)
        b, n, d = e.shape
        flat = e.reshape(b * n, d)
        cols = self.pattern.slot_columns

        factor_values, factor_traces = [], []
        for mlp in self.factor_mlps:
            out, trace = mlp.forward_trace(flat)
            factor_values.append(out.reshape(b, n, -1))
            factor_traces.append(trace)
        v, v_trace = self.value_mlp.forward_trace(flat)
        v = v.reshape(b, n, -1)

        # fold right to left: Y_M = W(M) V, ..., E_new = W(1) Y_2
        chain_inputs: List[np.ndarray] = [None] * self.m
        y = v
        for m in reversed(range(self.m)):
            chain_inputs[m] = y
            y = _apply_slots(factor_values[m], y, cols)
        e_new = y + v if self.cfg.residual else y

        pooled = e_new.mean(axis=1)
        output, head_trace = self.head.forward_trace(pooled)
        if not np.all(np.isfinite(output)):
            raise NumericFaultError("PSF-Attn forward produced NaN or Inf")
        cache = _BatchCache(inputs, flat, factor_values, factor_traces, chain_inputs,
                            v_trace, pooled, head_trace)
        return output, cache

    def backward(self, cache: _BatchCache, upstream: np.ndarray) -> Params:
        """Gradients of every parameter given dLoss/dOutput."""
        grads: Params = {}
        head_grads, d_pooled = self.head.backward(cache.pooled, upstream, cache.head_trace)
        grads.update({f"head.{k}": g for k, g in head_grads.items()})

        b, n = cache.pooled.shape[0], self.n
        d_enew = np.repeat(d_pooled[:, None, :] / n, n, axis=1)
        cols = self.pattern.slot_columns

        dy = d_enew
        d_factors = []
        for m in range(self.m):
            y_in = cache.chain_inputs[m]
            w = cache.factor_values[m]
            d_factors.append(np.einsum('bid,bisd->bis', dy, y_in[:, cols, :]))
            d_next = np.zeros_like(y_in)
            # every slot column is a permutation of 0..N-1
            for s in range(cols.shape[1]):
                d_next[:, cols[:, s], :] += w[:, :, s, None] * dy
            dy = d_next
        d_v = dy + d_enew if self.cfg.residual else dy

        value_grads, d_flat = self.value_mlp.backward(
            cache.flat, d_v.reshape(b * n, -1), cache.v_trace
        )
        grads.update({f"value.{k}": g for k, g in value_grads.items()})
        for m, mlp in enumerate(self.factor_mlps):
            f_grads, d_in = mlp.backward(
                cache.flat, d_factors[m].reshape(b * n, -1), cache.factor_traces[m]
            )
            grads.update({f"factor{m + 1}.{k}": g for k, g in f_grads.items()})
            d_flat = d_flat + d_in

        d_e = d_flat.reshape(b, n, -1)
        if self.position is not None:
            grads["position"] = d_e.sum(axis=0)
        if self.table is not None:
            d_table = np.zeros_like(self.table)
            np.add.at(d_table, cache.inputs, d_e)
            grads["encoder.table"] = d_table
        else:
            lift_grads, _ = self.lift.backward(cache.inputs.reshape(b * n, -1), d_flat)
            grads.update({f"encoder.{k}": g for k, g in lift_grads.items()})
        return grads

    def loss_and_grad(self, inputs: np.ndarray, targets: np.ndarray) -> Tuple[float, Params]:
        output, cache = self.forward_batch(inputs)
        loss, upstream = self.task.loss_and_grad(output, np.asarray(targets))
        return loss, self.backward(cache, upstream)

    def predict(self, inputs: np.ndarray) -> np.ndarray:
        return self.forward_batch(inputs)[0]


def build_factors(e: np.ndarray, model: PsfAttnModel) -> FactorChain:
    """The factor chain for one sequence's embedding E (N x d)."""
    e = np.asarray(e, dtype=np.float64)
    pattern = model.pattern
    if e.ndim != 2 or e.shape[0] != pattern.n:
        raise LengthMismatchError(f"Embedding has shape {e.shape}, pattern has N={pattern.n}")
    values = []
    for m, mlp in enumerate(model.factor_mlps, 1):
        out = mlp.forward(e)
        if not np.all(np.isfinite(out)):
            raise NumericFaultError(f"Factor MLP {m} produced NaN or Inf")
        flat = np.empty(pattern.nnz)
        flat[pattern.slot_to_flat] = out
        values.append(flat)
    return chain_from_values(pattern, values)


def forward(sequence: np.ndarray, model: PsfAttnModel) -> ForwardTrace:
    """Full block on one token or feature sequence."""
    e = model.embed(sequence)
    chain = build_factors(e, model)
    v = model.value_mlp.forward(e)
    e_new = chain_apply(chain, v)
    if model.cfg.residual:
        e_new = e_new + v
    pooled = e_new.mean(axis=0)
    output = model.head.forward(pooled[None])[0]
    return ForwardTrace(chain=chain, e=e, v=v, e_new=e_new, pooled=pooled, output=output)


def attention_row(model: PsfAttnModel, e: np.ndarray, i: int) -> np.ndarray:
    return row_of_product(build_factors(e, model), i)


def attention_map(model: PsfAttnModel, e: np.ndarray, indices: Sequence[int]) -> np.ndarray:
    """Sum of |row_i| of the attention matrix over the given rows."""
    chain = build_factors(e, model)
    total = np.zeros(model.n)
    for i in indices:
        total += np.abs(row_of_product(chain, int(i)))
    return total


def as_grid(vector: np.ndarray) -> np.ndarray:
    """Reshape to side x side when the length is a perfect square."""
    side = int(round(np.sqrt(vector.size)))
    return vector.reshape(side, side) if side * side == vector.size else vector[None, :]


def save_model(model: PsfAttnModel, directory: str) -> None:
    params = model.parameters()
    os.makedirs(os.path.join(directory, "params"), exist_ok=True)
    write_json(os.path.join(directory, "pattern.json"), model.pattern.to_json())
    for name, value in params.items():
        write_f64(os.path.join(directory, "params", f"{name}.f64"), value)
    write_json(os.path.join(directory, "manifest.json"), {
        "task": model.task.name,
        "n": model.n,
        "m": model.m,
        "seed": model.seed,
        "config": model.cfg.to_dict(),
        "params": {name: list(value.shape) for name, value in params.items()},
    })
    logger.debug("Saved checkpoint with %d arrays to %s", len(params), directory)


def load_model(directory: str) -> PsfAttnModel:
    manifest = read_json(os.path.join(directory, "manifest.json"))
    try:
        cfg = ModelConfig.from_mapping(manifest["config"])
        cfg.m_factors = int(manifest["m"])
        model = PsfAttnModel.create(int(manifest["n"]), manifest["task"], cfg, int(manifest.get("seed", 0)))
        shapes = manifest["params"]
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"Malformed model manifest in '{directory}': {e}")

    pattern = pattern_from_json(read_json(os.path.join(directory, "pattern.json")))
    if not pattern.same_as(model.pattern):
        raise InputError("Checkpoint pattern does not match its manifest")
    params = model.parameters()
    if set(shapes) != set(params):
        raise InputError("Checkpoint parameters do not match the model layout")
    for name, value in params.items():
        value[...] = read_f64(os.path.join(directory, "params", f"{name}.f64"), tuple(shapes[name]))
    if not all(np.all(np.isfinite(v)) for v in params.values()):
        raise NumericFaultError(f"Checkpoint in '{directory}' holds non-finite values")
    return model
