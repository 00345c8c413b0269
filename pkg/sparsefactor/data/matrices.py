"""
Square-matrix ingestion and synthetic matrix families.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np
import scipy.io
import scipy.sparse as sps

from ..chord import build_pattern
from ..config import default_factor_count
from ..errors import InputError, InvalidDimensionError
from ..factorization import chain_materialize, init_chain

logger = logging.getLogger(__name__)

POST_TRANSFORMS = ('none', 'gradient_magnitude')


@dataclass(frozen=True)
class MatrixSource:
    kind: str
    path: str
    post: str = 'none'

    @property
    def name(self) -> str:
        return self.path.replace("\\", "/").rsplit("/", 1)[-1]


def _read_matrix_market(path: str) -> np.ndarray:
    try:
        m = scipy.io.mmread(path)
    except (OSError, ValueError) as e:
        raise InputError(f"Cannot read MatrixMarket file '{path}': {e}")
    return m.toarray() if sps.issparse(m) else np.asarray(m)


def _read_dense_csv(path: str) -> np.ndarray:
    try:
        return np.loadtxt(path, delimiter=",", ndmin=2)
    except (OSError, ValueError) as e:
        raise InputError(f"Cannot read CSV '{path}': {e}")


def _next_token(raw: bytes, pos: int):
    while pos < len(raw):
        ch = raw[pos:pos + 1]
        if ch.isspace():
            pos += 1
        elif ch == b'#':
            end = raw.find(b'\n', pos)
            pos = len(raw) if end < 0 else end + 1
        else:
            break
    start = pos
    while pos < len(raw) and not raw[pos:pos + 1].isspace():
        pos += 1
    if start == pos:
        raise InputError("Truncated PGM header")
    return raw[start:pos], pos


def _read_pgm(path: str) -> np.ndarray:
    """P2 (ASCII) and P5 (binary) greymaps; intensities kept as stored."""
    try:
        with open(path, 'rb') as f:
            raw = f.read()
    except OSError as e:
        raise InputError(f"Cannot read PGM '{path}': {e}")

    pos = 0
    header = []
    for _ in range(4):
        token, pos = _next_token(raw, pos)
        header.append(token)
    magic = header[0]
    try:
        width, height, maxval = (int(t) for t in header[1:])
    except ValueError:
        raise InputError(f"Malformed PGM header in '{path}'")
    count = width * height

    if magic == b'P2':
        body = [line.split(b'#', 1)[0] for line in raw[pos:].splitlines()]
        values = np.array(b" ".join(body).split(), dtype=np.float64)
        if values.size < count:
            raise InputError(f"PGM '{path}' holds {values.size} pixels, expected {count}")
        pixels = values[:count]
    elif magic == b'P5':
        dtype = np.uint8 if maxval < 256 else np.dtype('>u2')
        try:
            pixels = np.frombuffer(raw, dtype=dtype, count=count, offset=pos + 1).astype(np.float64)
        except ValueError:
            raise InputError(f"PGM '{path}' is truncated")
    else:
        raise InputError(f"Unsupported PGM magic {magic!r} in '{path}'")
    return pixels.reshape(height, width)


def _covariance_of_csv(path: str) -> np.ndarray:
    # rows are observations; mean-centred, divided by n
    data = _read_dense_csv(path)
    return np.atleast_2d(np.cov(data, rowvar=False, bias=True))


def _read_pajek(path: str) -> np.ndarray:
    """Pajek network as an affinity matrix (1-based vertex ids, optional weights)."""
    try:
        with open(path, 'r', encoding='utf-8', errors='replace') as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise InputError(f"Cannot read Pajek network '{path}': {e}")

    a: Optional[np.ndarray] = None
    section = None
    matrix_row = 0
    for lineno, line in enumerate(lines, 1):
        parts = line.split()
        if not parts or parts[0].startswith('%'):
            continue
        if parts[0].startswith('*'):
            section = parts[0][1:].lower()
            if section == 'vertices':
                a = np.zeros((int(parts[1]), int(parts[1])))
            matrix_row = 0
            continue
        if a is None:
            raise InputError(f"{path}:{lineno}: data before *Vertices")
        try:
            if section in ('arcs', 'edges'):
                i, j = int(parts[0]) - 1, int(parts[1]) - 1
                w = float(parts[2]) if len(parts) > 2 else 1.0
                a[i, j] += w
                if section == 'edges' and i != j:
                    a[j, i] += w
            elif section in ('arcslist', 'edgeslist'):
                i = int(parts[0]) - 1
                for tok in parts[1:]:
                    j = int(tok) - 1
                    a[i, j] += 1.0
                    if section == 'edgeslist' and i != j:
                        a[j, i] += 1.0
            elif section == 'matrix':
                a[matrix_row, :] = [float(t) for t in parts]
                matrix_row += 1
        except (ValueError, IndexError) as e:
            raise InputError(f"{path}:{lineno}: malformed line ({e})")
    if a is None:
        raise InputError(f"Pajek network '{path}' has no *Vertices line")
    return a


LOADERS: Dict[str, Callable[[str], np.ndarray]] = {
    'matrix_market': _read_matrix_market,
    'dense_csv': _read_dense_csv,
    'pgm_image': _read_pgm,
    'covariance_of_csv': _covariance_of_csv,
    'pajek_net': _read_pajek,
}


def gradient_magnitude(img: np.ndarray) -> np.ndarray:
    """sqrt(gx^2 + gy^2); central differences inside, one-sided at the border."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2 or min(img.shape) < 2:
        raise InvalidDimensionError(f"Gradient needs a 2-D image of at least 2x2, got {img.shape}")
    gy, gx = np.gradient(img)
    return np.sqrt(gx * gx + gy * gy)


def load_matrix(src: MatrixSource) -> np.ndarray:
    if src.kind not in LOADERS:
        raise InputError(f"Unknown matrix kind '{src.kind}'. Available: {', '.join(LOADERS)}")
    if src.post not in POST_TRANSFORMS:
        raise InputError(f"Unknown post transform '{src.post}'")

    x = np.asarray(LOADERS[src.kind](src.path), dtype=np.float64)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise InputError(f"'{src.path}' gives a {x.shape} matrix; a square matrix is required")
    if not np.all(np.isfinite(x)):
        raise InputError(f"'{src.path}' contains NaN or Inf")
    if src.post == 'gradient_magnitude':
        x = gradient_magnitude(x)
    logger.debug("Loaded %s '%s' as %dx%d", src.kind, src.path, *x.shape)
    return x


def _planted_chain(n: int, rng: np.random.Generator, mode: str = 'full_coverage',
                   m_factors: Optional[int] = None, **_) -> np.ndarray:
    pattern = build_pattern(n, mode)
    m = m_factors or default_factor_count(n)
    return chain_materialize(init_chain(pattern, m, int(rng.integers(0, 2 ** 31))))


def _low_rank(n: int, rng: np.random.Generator, rank: int = 3, **_) -> np.ndarray:
    if not 1 <= rank <= n:
        raise InvalidDimensionError(f"Rank must be in [1, {n}], got {rank}")
    return rng.standard_normal((n, rank)) @ rng.standard_normal((rank, n))


def _random_sparse(n: int, rng: np.random.Generator, density: Optional[float] = None, **_) -> np.ndarray:
    nnz = round(n * n * density) if density is not None else round(n * math.log2(n))
    nnz = min(max(nnz, 1), n * n)
    x = np.zeros(n * n)
    x[rng.choice(n * n, size=nnz, replace=False)] = rng.standard_normal(nnz)
    return x.reshape(n, n)


def _identity(n: int, rng: np.random.Generator, **_) -> np.ndarray:
    return np.eye(n)


SYNTH_KINDS = {
    'planted_chain': _planted_chain,
    'low_rank': _low_rank,
    'random_sparse': _random_sparse,
    'identity': _identity,
}


def synth_matrix(kind: str, n: int, seed: int = 0, **options) -> np.ndarray:
    """Seeded test matrix; ``options`` go to the family (rank, density, mode, m_factors)."""
    if kind not in SYNTH_KINDS:
        raise InputError(f"Unknown synthetic matrix '{kind}'. Available: {', '.join(SYNTH_KINDS)}")
    if n < 2:
        raise InvalidDimensionError(f"Matrix size must be >= 2, got {n}")
    rng = np.random.default_rng(seed)
    return SYNTH_KINDS[kind](n, rng, **options)
