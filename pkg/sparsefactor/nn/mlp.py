"""
Dense multi-layer perceptron with exact reverse-mode gradients.
"""

from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import InvalidDimensionError

Activation = Tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]

# name -> (function, derivative expressed through the function's output)
ACTIVATIONS: Dict[str, Activation] = {
    'tanh': (np.tanh, lambda a: 1.0 - a * a),
    'relu': (lambda z: np.maximum(z, 0.0), lambda a: (a > 0).astype(a.dtype)),
}


class Mlp:
    """Affine layers with an activation between them (none after the last)."""

    def __init__(self, widths: Sequence[int], activation: str = 'tanh', seed: int = 0,
                 params: Optional[Dict[str, np.ndarray]] = None):
        self.widths = [int(w) for w in widths]
        if len(self.widths) < 2 or min(self.widths) < 1:
            raise InvalidDimensionError(f"Invalid MLP widths {self.widths}")
        if activation not in ACTIVATIONS:
            raise InvalidDimensionError(f"Unknown activation '{activation}'")
        self.activation = activation
        self.seed = seed
        self.params = params if params is not None else self._init_params(seed)
        for l, (fan_in, fan_out) in enumerate(zip(self.widths[:-1], self.widths[1:])):
            if self.params[f"w{l}"].shape != (fan_in, fan_out) or self.params[f"b{l}"].shape != (fan_out,):
                raise InvalidDimensionError(f"Layer {l} parameters do not match widths {self.widths}")

    def _init_params(self, seed: int) -> Dict[str, np.ndarray]:
        rng = np.random.default_rng(seed)
        params = {}
        for l, (fan_in, fan_out) in enumerate(zip(self.widths[:-1], self.widths[1:])):
            bound = np.sqrt(6.0 / (fan_in + fan_out))
            params[f"w{l}"] = rng.uniform(-bound, bound, size=(fan_in, fan_out))
            params[f"b{l}"] = np.zeros(fan_out)
        return params

    @property
    def n_layers(self) -> int:
        return len(self.widths) - 1

    @property
    def in_dim(self) -> int:
        return self.widths[0]

    @property
    def out_dim(self) -> int:
        return self.widths[-1]

    def _check_input(self, batch: np.ndarray) -> np.ndarray:
        batch = np.asarray(batch, dtype=np.float64)
        if batch.ndim != 2 or batch.shape[1] != self.in_dim:
            raise InvalidDimensionError(f"MLP expects (B, {self.in_dim}) input, got {batch.shape}")
        return batch

    def forward_trace(self, batch: np.ndarray) -> Tuple[np.ndarray, List[np.ndarray]]:
        """Output plus the input of every layer (needed by backward)."""
        act, _ = ACTIVATIONS[self.activation]
        h = self._check_input(batch)
        trace = [h]
        for l in range(self.n_layers):
            h = h @ self.params[f"w{l}"] + self.params[f"b{l}"]
            if l < self.n_layers - 1:
                h = act(h)
            trace.append(h)
        return h, trace

    def forward(self, batch: np.ndarray) -> np.ndarray:
        return self.forward_trace(batch)[0]

    def backward(self, batch: np.ndarray, upstream: np.ndarray,
                 trace: Optional[List[np.ndarray]] = None) -> Tuple[Dict[str, np.ndarray], np.ndarray]:
        """Gradients w.r.t. parameters and input, given dLoss/dOutput."""
        if trace is None:
            _, trace = self.forward_trace(batch)
        upstream = np.asarray(upstream, dtype=np.float64)
        if upstream.shape != trace[-1].shape:
            raise InvalidDimensionError(f"Upstream gradient {upstream.shape} does not match output {trace[-1].shape}")
        _, act_grad = ACTIVATIONS[self.activation]

        grads: Dict[str, np.ndarray] = {}
        g = upstream
        for l in reversed(range(self.n_layers)):
            if l < self.n_layers - 1:
                g = g * act_grad(trace[l + 1])
            grads[f"w{l}"] = trace[l].T @ g
            grads[f"b{l}"] = g.sum(axis=0)
            g = g @ self.params[f"w{l}"].T
        return grads, g


def mlp_forward(m: Mlp, batch: np.ndarray) -> np.ndarray:
    return m.forward(batch)


def mlp_backward(m: Mlp, batch: np.ndarray, upstream: np.ndarray) -> Tuple[Dict[str, np.ndarray], np.ndarray]:
    return m.backward(batch, upstream)
