"""
Configuration management for sparsefactor.

Configs are plain dataclasses. A YAML file may hold any of the sections
``sf``, ``model`` and ``train``; CLI flags override file values.
"""

import math
import os
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Mapping, Optional

import yaml

from .errors import ConfigurationError

PATTERN_MODES = ("paper_literal", "full_coverage")
ACTIVATIONS = ("tanh", "relu")
CONFIG_SECTIONS = ("sf", "model", "train")

THREADS_ENV = "SF_THREADS"
LOG_LEVEL_ENV = "SF_LOG_LEVEL"


def default_factor_count(n: int) -> int:
    """M = ceil(log2 N), at least one factor."""
    return max(1, math.ceil(math.log2(n)))


class _ConfigMixin:
    @classmethod
    def from_mapping(cls, mapping: Optional[Mapping[str, Any]] = None, **overrides: Any):
        """Build from a mapping, then apply non-None overrides."""
        values: Dict[str, Any] = dict(mapping or {})
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigurationError(
                f"Unknown {cls.__name__} keys: {', '.join(unknown)}"
            )
        values.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**values)
        except TypeError as e:
            raise ConfigurationError(str(e))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class SfConfig(_ConfigMixin):
    """Non-parametric solver settings."""
    m_factors: Optional[int] = None
    max_iters: int = 20000
    learning_rate: float = 1e-2
    seed: int = 0
    stop_rel_improvement: float = 1e-9
    stop_window: int = 50
    plateau_factor: float = 0.5
    min_learning_rate: float = 1e-10
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    log_every: int = 1000

    def __post_init__(self):
        if self.m_factors is not None and self.m_factors < 1:
            raise ConfigurationError("m_factors must be >= 1")
        if self.max_iters < 1:
            raise ConfigurationError("max_iters must be >= 1")
        if self.learning_rate <= 0:
            raise ConfigurationError("learning_rate must be > 0")
        if self.stop_window < 1:
            raise ConfigurationError("stop_window must be >= 1")
        if not 0 < self.plateau_factor <= 1:
            raise ConfigurationError("plateau_factor must be in (0, 1]")
        if self.log_every < 1:
            raise ConfigurationError("log_every must be >= 1")

    def factors_for(self, n: int) -> int:
        return self.m_factors if self.m_factors is not None else default_factor_count(n)


@dataclass
class ModelConfig(_ConfigMixin):
    """PSF-Attn architecture settings."""
    d: int = 32
    d_v: Optional[int] = None
    hidden: int = 64
    activation: str = "tanh"
    mode: str = "full_coverage"
    m_factors: Optional[int] = None
    residual: bool = False
    positional: bool = True

    def __post_init__(self):
        if self.d < 1 or (self.d_v is not None and self.d_v < 1):
            raise ConfigurationError("d and d_v must be >= 1")
        if self.hidden < 1:
            raise ConfigurationError("hidden must be >= 1")
        if self.activation not in ACTIVATIONS:
            raise ConfigurationError(f"activation must be one of {ACTIVATIONS}")
        if self.mode not in PATTERN_MODES:
            raise ConfigurationError(f"mode must be one of {PATTERN_MODES}")
        if self.m_factors is not None and self.m_factors < 1:
            raise ConfigurationError("m_factors must be >= 1")

    @property
    def value_dim(self) -> int:
        return self.d_v if self.d_v is not None else self.d


@dataclass
class TrainConfig(_ConfigMixin):
    """Training loop settings (defaults follow the Adam setup of the synthetic tasks)."""
    epochs: int = 20
    batch_size: int = 40
    learning_rate: float = 1e-3
    seed: int = 0
    repeats: int = 1
    threads: int = 1
    log_every: int = 100

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1 or self.repeats < 1:
            raise ConfigurationError("epochs, batch_size and repeats must be >= 1")
        if self.learning_rate <= 0:
            raise ConfigurationError("learning_rate must be > 0")
        if self.threads < 1:
            raise ConfigurationError("threads must be >= 1")


def load_config(path: Optional[str]) -> Dict[str, Dict[str, Any]]:
    """Read a YAML config file into its sections."""
    if not path:
        return {}
    try:
        with open(path, 'r') as f:
            raw = yaml.safe_load(f) or {}
    except FileNotFoundError:
        raise ConfigurationError(f"Config file '{path}' does not exist")
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Invalid YAML in '{path}': {e}")

    if not isinstance(raw, dict):
        raise ConfigurationError("Config file must contain a mapping")
    unknown = sorted(set(raw) - set(CONFIG_SECTIONS))
    if unknown:
        raise ConfigurationError(f"Unknown config sections: {', '.join(unknown)}")
    return {k: dict(v or {}) for k, v in raw.items()}


def resolve_threads(flag_value: Optional[int]) -> int:
    """SF_THREADS wins over --threads; default is one thread."""
    env = os.getenv(THREADS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ConfigurationError(f"{THREADS_ENV} must be an integer, got '{env}'")
    else:
        value = flag_value if flag_value is not None else 1
    if value < 1:
        raise ConfigurationError("thread count must be >= 1")
    return value


def resolve_log_level(verbose: bool = False, quiet: bool = False) -> str:
    env = os.getenv(LOG_LEVEL_ENV)
    if env:
        return env.upper()
    if verbose:
        return "DEBUG"
    if quiet:
        return "WARNING"
    return "INFO"
