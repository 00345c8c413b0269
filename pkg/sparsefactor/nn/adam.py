"""
Adam optimizer over dicts of numpy parameters.
"""

from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from ..errors import InvalidDimensionError


@dataclass
class AdamState:
    """Moment estimates, step counter and hyperparameters."""
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    t: int = 0
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)

    def step(self, params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray]) -> None:
        adam_step(params, grads, self)


def adam_step(params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray], state: AdamState) -> None:
    """One bias-corrected Adam update, in place on ``params``."""
    state.t += 1
    bc1 = 1.0 - state.beta1 ** state.t
    bc2 = 1.0 - state.beta2 ** state.t
    step_size = state.lr / bc1

    for k in params:
        g = grads[k]
        p = params[k]
        if g.shape != p.shape:
            raise InvalidDimensionError(f"Gradient for '{k}' has shape {g.shape}, expected {p.shape}")
        if k not in state.m:
            state.m[k] = np.zeros_like(p)
            state.v[k] = np.zeros_like(p)

        state.m[k] *= state.beta1
        state.m[k] += (1.0 - state.beta1) * g
        state.v[k] *= state.beta2
        state.v[k] += (1.0 - state.beta2) * (g * g)

        denom = np.sqrt(state.v[k] * (1.0 / bc2)) + state.epsilon
        p -= step_size * state.m[k] / denom
