"""Counter-based random streams.

Every draw is addressed by ``(seed, stream, index)``. Indices are grouped in
fixed blocks of ``BLOCK`` entries; block ``k`` of a stream is produced by a
Philox generator keyed on ``(seed, stream)`` and jumped ``k`` times, so any
index range can be regenerated on its own. Splitting a range across workers
therefore yields the same values as one serial pass.
"""

from enum import IntEnum

import numpy as np

BLOCK = 1 << 16
_U64 = 1 << 64


class Stream(IntEnum):
    OUTER = 1
    INNER = 2
    NOISE_BOB = 3
    NOISE_EVE = 4
    PAYLOAD = 5


def check_seed(seed):
    """Return ``seed`` as a Python int, rejecting values outside [0, 2**64)."""
    if isinstance(seed, (bool, np.bool_)) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed < _U64:
        raise ValueError(f"seed must lie in [0, 2**64), got {seed}")
    return seed


def block_generator(seed, stream, block):
    """Generator for one block of a stream."""
    key = check_seed(seed) | (int(stream) << 64)
    return np.random.Generator(np.random.Philox(key=key).jumped(int(block)))


def _blocks(start, stop):
    if start < 0 or stop < start:
        raise ValueError(f"invalid index range [{start}, {stop})")
    return range(start // BLOCK, (stop - 1) // BLOCK + 1) if stop > start else range(0)


def _gather(seed, stream, start, stop, draw):
    parts = []
    for k in _blocks(start, stop):
        chunk = draw(block_generator(seed, stream, k))
        lo = max(start - k * BLOCK, 0)
        hi = min(stop - k * BLOCK, BLOCK)
        parts.append(chunk[lo:hi])
    if not parts:
        return draw(None)
    return np.concatenate(parts)


def normals(seed, stream, start, stop):
    """Standard normal pairs for indices ``[start, stop)``, shape ``(n, 2)``."""

    def draw(gen):
        if gen is None:
            return np.empty((0, 2))
        return gen.standard_normal((BLOCK, 2))

    return _gather(seed, stream, start, stop, draw)


def labels(seed, stream, start, stop, n_labels=4):
    """Uniform integer labels in ``[0, n_labels)`` for indices ``[start, stop)``."""

    def draw(gen):
        if gen is None:
            return np.empty(0, dtype=np.uint8)
        return gen.integers(0, n_labels, size=BLOCK, dtype=np.uint8)

    return _gather(seed, stream, start, stop, draw)


def derive_seed(seed, *path):
    """Child seed for a sub-task, e.g. one cell of a validation grid."""
    entropy = [check_seed(seed)] + [int(p) for p in path]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])
