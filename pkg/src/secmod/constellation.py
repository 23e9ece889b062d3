"""4-QAM alphabet, two-layer superposition and outer-layer recovery.

Labels are integers ``0..3`` holding the two bits ``b1 b0``: ``b1`` selects
the sign of the real part and ``b0`` the sign of the imaginary part
(0 -> positive, 1 -> negative). The alphabet is scaled to unit average power::

    0 '00' -> (+1 + 1j) / sqrt(2)
    1 '01' -> (+1 - 1j) / sqrt(2)
    2 '10' -> (-1 + 1j) / sqrt(2)
    3 '11' -> (-1 - 1j) / sqrt(2)

Superposed 16-QAM points are named by the four-character string
``inner + outer``, e.g. ``'0010'`` is inner ``'00'`` carrying outer ``'10'``.
"""

import math

import numpy as np

from secmod import rng
from secmod.errors import FrameMismatchError, PacDomainError

ALPHABET = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / math.sqrt(2)
LABELS = ("00", "01", "10", "11")


def check_pac(a):
    """Validate a power allocation coefficient; returns it as float."""
    a_arr = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a_arr)) or np.any(a_arr <= 0.0) or np.any(a_arr >= 0.5):
        raise PacDomainError(f"power allocation coefficient must lie in (0, 0.5), got {a!r}")
    return float(a_arr) if a_arr.ndim == 0 else a_arr


def offsets(a):
    """Per-axis offsets ``(d1, d2) = (sqrt(a/2), sqrt((1-a)/2))``."""
    a = np.asarray(a, dtype=float)
    return np.sqrt(a / 2.0), np.sqrt((1.0 - a) / 2.0)


def parse_label(label):
    """``'10'`` -> 2. Integers in 0..3 pass through."""
    if isinstance(label, str):
        if len(label) != 2 or set(label) - {"0", "1"}:
            raise ValueError(f"not a two-bit label: {label!r}")
        return int(label, 2)
    value = int(label)
    if not 0 <= value < 4:
        raise ValueError(f"label value out of range: {label!r}")
    return value


def _as_labels(bits):
    if isinstance(bits, str):
        bits = [bits]
    if isinstance(bits, np.ndarray) and bits.dtype.kind in "iu":
        if bits.size and (bits.min() < 0 or bits.max() > 3):
            raise ValueError("labels must lie in 0..3")
        return bits.astype(np.uint8)
    return np.array([parse_label(b) for b in bits], dtype=np.uint8)


def modulate_outer(bits):
    """Map two-bit labels (ints or ``'01'``-style strings) to unit-power 4-QAM points."""
    return ALPHABET[_as_labels(bits)]


def random_inner(count, seed):
    """``count`` inner symbols drawn uniformly from the alphabet, reproducible per seed."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    return ALPHABET[rng.labels(seed, rng.Stream.INNER, 0, int(count))]


def superpose(outer, inner, a):
    """Elementwise ``sqrt(a) * outer + sqrt(1 - a) * inner``."""
    a = check_pac(a)
    outer = np.asarray(outer, dtype=complex)
    inner = np.asarray(inner, dtype=complex)
    if outer.shape != inner.shape:
        raise FrameMismatchError(
            f"outer and inner frames differ in shape: {outer.shape} vs {inner.shape}")
    return math.sqrt(a) * outer + math.sqrt(1.0 - a) * inner


def recover_outer(points, a):
    """Strip the inner layer by shifting each point toward the origin.

    Each axis moves by ``sqrt((1-a)/2)`` toward zero according to the sign of
    that coordinate; a coordinate of exactly zero is treated as nonnegative.
    """
    a = check_pac(a)
    z = np.asarray(points, dtype=complex)
    shift = math.sqrt((1.0 - a) / 2.0)
    x = z.real - np.where(z.real >= 0, shift, -shift)
    y = z.imag - np.where(z.imag >= 0, shift, -shift)
    out = x + 1j * y
    return complex(out) if out.ndim == 0 else out


def detect_outer(points):
    """Nearest alphabet label; for 4-QAM this is the quadrant, zero counting as positive."""
    z = np.asarray(points, dtype=complex)
    out = 2 * (z.real < 0).astype(np.uint8) + (z.imag < 0).astype(np.uint8)
    return int(out) if out.ndim == 0 else out


def labels_to_bits(labels):
    """Unpack labels into a flat bit array, ``b1`` first."""
    labels = np.asarray(labels, dtype=np.uint8)
    return np.stack([(labels >> 1) & 1, labels & 1], axis=-1).reshape(-1)


def bits_to_labels(bits):
    """Pack a flat bit array (even length) into two-bit labels."""
    bits = np.asarray(bits, dtype=np.uint8).reshape(-1, 2)
    return (bits[:, 0] << 1) | bits[:, 1]
