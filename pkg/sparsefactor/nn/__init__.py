"""
Minimal neural-network stack: MLPs with backprop and the Adam optimizer.
"""

from .adam import AdamState, adam_step
from .mlp import ACTIVATIONS, Mlp, mlp_backward, mlp_forward

__all__ = ['AdamState', 'adam_step', 'ACTIVATIONS', 'Mlp', 'mlp_backward', 'mlp_forward']
