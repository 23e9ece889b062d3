"""Complex AWGN channels for Bob and Eve.

Noise is added independently on the real and imaginary axis, each with
standard deviation ``sigma`` (so the complex noise variance is ``2 sigma**2``).
"""

from dataclasses import dataclass

import numpy as np

from secmod import rng

RECEIVERS = {"bob": rng.Stream.NOISE_BOB, "eve": rng.Stream.NOISE_EVE}


@dataclass(frozen=True)
class ChannelSpec:
    sigma: float
    seed: int
    label: str = "bob"

    def __post_init__(self):
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma}")
        if self.label not in RECEIVERS:
            raise ValueError(f"label must be one of {sorted(RECEIVERS)}, got {self.label!r}")
        rng.check_seed(self.seed)

    @property
    def stream(self):
        return RECEIVERS[self.label]


def noise(spec, start, stop):
    """Complex noise samples for frame indices ``[start, stop)``."""
    z = rng.normals(spec.seed, spec.stream, start, stop)
    return spec.sigma * (z[:, 0] + 1j * z[:, 1])


def transmit(frame, spec, offset=0):
    """Add the channel noise to ``frame``.

    ``offset`` is the index of ``frame[0]`` within a longer logical frame;
    transmitting disjoint slices with their offsets reproduces the serial result.
    """
    frame = np.asarray(frame, dtype=complex)
    if frame.ndim != 1:
        raise ValueError("frame must be one-dimensional")
    return frame + noise(spec, offset, offset + frame.size)
