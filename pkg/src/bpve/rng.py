"""Counter-based random streams for reproducible parallel simulation.

All simulation randomness flows through Philox4x64-10 evaluated at explicit
counters, so every draw is addressed by (seed, stream kind, replica,
generation/node, slot) and is independent of execution order, chunking and
thread count.  The implementation is verified bit-for-bit against
``numpy.random.Philox`` in the test suite.

The constants below are part of the reproducibility contract: changing any
of them changes every stream.
"""

from __future__ import annotations

import numpy as np

_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_WEYL0 = np.uint64(0x9E3779B97F4A7C15)
_WEYL1 = np.uint64(0xBB67AE8584CAA73B)
_MASK32 = np.uint64(0xFFFFFFFF)
_GOLDEN = 0x9E3779B97F4A7C15

# Stream kinds.  Each kind owns an independent Philox key so the engines can
# never collide on a counter.
KIND_ENSEMBLE = 1      # cross-replica population estimator
KIND_COUNTS = 2        # per-trajectory offspring counts
KIND_LABELS = 3        # per-trajectory fitness labels
KIND_PERCOLATION = 4   # accessible-path tree streaming

__all__ = [
    "philox4x64",
    "derive_key",
    "uniforms_at",
    "uniform_block",
    "splitmix64",
    "child_keys",
    "KIND_ENSEMBLE",
    "KIND_COUNTS",
    "KIND_LABELS",
    "KIND_PERCOLATION",
]


def _mulhilo(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # 64x64 -> 128 bit product via 32-bit limbs; numpy uint64 wraps mod 2^64.
    lo = a * b
    ah, al = a >> np.uint64(32), a & _MASK32
    bh, bl = b >> np.uint64(32), b & _MASK32
    t = al * bl
    c1 = ah * bl + (t >> np.uint64(32))
    c2 = al * bh + (c1 & _MASK32)
    hi = ah * bh + (c1 >> np.uint64(32)) + (c2 >> np.uint64(32))
    return hi, lo


def philox4x64(counter: np.ndarray, key: np.ndarray, rounds: int = 10) -> np.ndarray:
    """Philox4x64 block function.

    ``counter`` has shape (..., 4) and ``key`` shape (..., 2) (broadcastable),
    both uint64.  Returns the (..., 4) uint64 output block.
    """
    counter = np.asarray(counter, dtype=np.uint64)
    key = np.asarray(key, dtype=np.uint64)
    c0 = counter[..., 0].copy()
    c1 = counter[..., 1].copy()
    c2 = counter[..., 2].copy()
    c3 = counter[..., 3].copy()
    k0 = np.broadcast_to(key[..., 0], c0.shape).copy()
    k1 = np.broadcast_to(key[..., 1], c0.shape).copy()
    with np.errstate(over="ignore"):
        for _ in range(rounds):
            hi0, lo0 = _mulhilo(_M0, c0)
            hi1, lo1 = _mulhilo(_M1, c2)
            c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
            k0 = k0 + _WEYL0
            k1 = k1 + _WEYL1
    return np.stack([c0, c1, c2, c3], axis=-1)


def splitmix64(x: np.ndarray | int) -> np.ndarray:
    """SplitMix64 finalizer, vectorized over uint64 arrays."""
    with np.errstate(over="ignore"):
        z = np.asarray(x, dtype=np.uint64) + np.uint64(_GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def derive_key(seed: int, kind: int) -> np.ndarray:
    """Derive the 128-bit Philox key owned by one stream kind."""
    s = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    k0 = splitmix64(s ^ splitmix64(np.uint64(kind)))
    k1 = splitmix64(k0 ^ np.uint64(_GOLDEN))
    return np.stack([k0, k1], axis=-1).reshape(2)


def _to_unit(words: np.ndarray) -> np.ndarray:
    # Top 53 bits, centered in the cell: strictly inside (0, 1), so quantile
    # transforms never see 0 or 1.
    return ((words >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def uniforms_at(key: np.ndarray, w0, w1, w2) -> np.ndarray:
    """One uniform per counter (w0, w1, w2, 0); arguments broadcast."""
    w0 = np.asarray(w0, dtype=np.uint64)
    w1 = np.broadcast_to(np.asarray(w1, dtype=np.uint64), w0.shape)
    w2 = np.broadcast_to(np.asarray(w2, dtype=np.uint64), w0.shape)
    ctr = np.stack([w0, w1, w2, np.zeros_like(w0)], axis=-1)
    return _to_unit(philox4x64(ctr, key)[..., 0])


def uniform_block(key: np.ndarray, w0: int, w1: int, count: int, start: int = 0) -> np.ndarray:
    """Uniforms for draw indices [start, start+count) addressed by (w0, w1),
    consuming counters (w0, w1, i, 0) in blocks of four words.  The same
    indices yield the same values regardless of chunking."""
    if count <= 0:
        return np.empty(0, dtype=np.float64)
    first_block, offset = divmod(start, 4)
    blocks = (offset + count + 3) // 4
    idx = np.arange(first_block, first_block + blocks, dtype=np.uint64)
    ctr = np.empty((blocks, 4), dtype=np.uint64)
    ctr[:, 0] = np.uint64(w0 & 0xFFFFFFFFFFFFFFFF)
    ctr[:, 1] = np.uint64(w1 & 0xFFFFFFFFFFFFFFFF)
    ctr[:, 2] = idx
    ctr[:, 3] = 0
    words = philox4x64(ctr, key).reshape(-1)
    return _to_unit(words[offset:offset + count])


def child_keys(parent_keys: np.ndarray, slots: np.ndarray) -> np.ndarray:
    """Per-node stream keys chained along tree paths.

    The key of child ``j`` is a SplitMix64 mix of the parent key and the
    child slot, so a node's stream depends only on its root-to-node path and
    tree traversals may visit nodes in any order.
    """
    parent_keys = np.asarray(parent_keys, dtype=np.uint64)
    slots = np.asarray(slots, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return splitmix64(parent_keys ^ ((slots + np.uint64(1)) * np.uint64(_GOLDEN)))
