"""Counter-based per-edge random streams.

A uniform for edge ``(x, y, axis)`` under ``seed`` is a pure function of those
four integers: the SplitMix64 finalizer applied to the packed edge coordinates
xor-ed with a mixed seed key. No state is carried between edges, so the value
an edge receives does not depend on the region it is sampled in, the order of
enumeration, or how work is split across processes.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1
_COORD_LIMIT = 1 << 30


def mix64(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = z + _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _zigzag(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    return ((v << 1) ^ (v >> 63)).astype(np.uint64)


def seed_key(seed: int) -> np.uint64:
    if not 0 <= seed <= _MASK64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return mix64(np.array([seed], dtype=np.uint64))[0]


def edge_uniforms(seed: int, x: np.ndarray, y: np.ndarray, axis: int) -> np.ndarray:
    """Uniforms in the open interval (0, 1), one per edge base coordinate."""
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if x.size and (np.abs(x).max() >= _COORD_LIMIT or np.abs(y).max() >= _COORD_LIMIT):
        raise ValueError("edge coordinates out of range for the stream packing")
    counter = (_zigzag(x) << np.uint64(32)) | (_zigzag(y) << np.uint64(1)) | np.uint64(axis & 1)
    bits = mix64(mix64(counter ^ seed_key(seed)))
    # top 53 bits, offset by half a step so 0 and 1 are never produced
    return ((bits >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def derive_seed(master_seed: int, *labels: int) -> int:
    """Deterministic child seed for e.g. ``(master_seed, n, replicate)``."""
    ss = np.random.SeedSequence([master_seed, *labels])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
