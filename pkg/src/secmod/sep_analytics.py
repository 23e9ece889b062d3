"""Closed-form outer-layer symbol error probability.

The receiver strips the inner layer with :func:`secmod.constellation.recover_outer`
and then makes a quadrant decision. With independent per-axis Gaussian noise
of standard deviation ``sigma`` every correct-decision region is a union of
axis-aligned rectangles, so each symbol correctness probability (SCP) is a
product of per-axis Gaussian interval probabilities.

Only the inner-``'00'`` case is evaluated: rotating the constellation by 90
degrees maps every inner symbol onto it, so its SEP equals the average over
all inner symbols.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc

from secmod.constellation import check_pac, offsets

TX_POWER = 1.0
SENT_ORDER = ("0010", "0000", "0011", "0001")
# inner part of the landing region, in table row order
REGION_ORDER = ("00", "10", "11", "01")


def q_function(x):
    """Gaussian upper-tail probability ``Q(x) = 0.5 * erfc(x / sqrt(2))``.

    Absolute error is at double precision level (well below 1e-12) for all
    finite ``x``.
    """
    out = 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))
    return float(out) if out.ndim == 0 else out


def sigma_from_snr(snr_db, power=TX_POWER):
    """Per-axis noise standard deviation for an SNR in dB: ``sqrt(P) * 10**(-snr/20)``."""
    out = np.sqrt(power) * 10.0 ** (-np.asarray(snr_db, dtype=float) / 20.0)
    return float(out) if out.ndim == 0 else out


def snr_from_sigma(sigma, power=TX_POWER):
    """Inverse of :func:`sigma_from_snr`."""
    return 10.0 * np.log10(power / np.asarray(sigma, dtype=float) ** 2)


def _check_sigma(sigma):
    s = np.asarray(sigma, dtype=float)
    if not np.all(np.isfinite(s)) or np.any(s <= 0):
        raise ValueError(f"noise standard deviation must be positive and finite, got {sigma!r}")


def _axis_factors(a, sigma):
    """Per-axis correct-decision probabilities relative to the sent coordinate.

    Keyed by (outer bit on this axis, whether the received coordinate stays on
    the sent inner half-axis). Outer bit 0 puts the sent coordinate at
    ``d2 + d1``, outer bit 1 at ``d2 - d1``.
    """
    d1, d2 = offsets(a)
    q = q_function
    return {
        (0, True): q(-d1 / sigma),
        (0, False): q(-(2 * d2 + d1) / sigma) - q(-(d1 + d2) / sigma),
        (1, True): q(-(d2 - d1) / sigma) - q(d1 / sigma),
        (1, False): q((2 * d2 - d1) / sigma),
    }


@dataclass
class SepBreakdown:
    """Every intermediate SCP of the inner-'00' case plus the final SEP.

    ``scp_cells`` maps ``(sent, region)`` to the probability that a sent
    superposed symbol lands in a correct-decision region, ``scp_outer`` maps
    each sent symbol to the sum over its four regions.
    """

    a: float
    sigma: float
    scp_cells: dict = field(default_factory=dict)
    scp_outer: dict = field(default_factory=dict)
    sep: float = float("nan")

    def named_fields(self):
        """Flat ``{'SCP_<region>^<sent>': value}`` mapping, 16 cells then 4 outer sums."""
        out = {f"SCP_{region}^{sent}": v for (sent, region), v in self.scp_cells.items()}
        for sent, v in self.scp_outer.items():
            out[f"SCP_{sent[2:]}^{sent}"] = v
        return out


def scp_breakdown(a, sigma):
    """All 16 SCP cells, the four per-outer-symbol SCPs and the SEP for scalar inputs."""
    a = check_pac(a)
    _check_sigma(sigma)
    sigma = float(sigma)
    f = _axis_factors(a, sigma)
    cells, outer = {}, {}
    for sent in SENT_ORDER:
        o = int(sent[2:], 2)
        o_re, o_im = o >> 1, o & 1
        total = 0.0
        for inner in REGION_ORDER:
            i = int(inner, 2)
            p = float(f[o_re, (i >> 1) == 0] * f[o_im, (i & 1) == 0])
            cells[sent, inner + sent[2:]] = p
            total += p
        outer[sent] = total
    sep = 1.0 - sum(outer.values()) / 4.0
    return SepBreakdown(a=a, sigma=sigma, scp_cells=cells, scp_outer=outer, sep=sep)


def sep(a, sigma):
    """Outer-layer SEP; broadcasts over array ``a`` and ``sigma``.

    Matches ``scp_breakdown(a, sigma).sep`` for scalars.
    """
    check_pac(a)
    _check_sigma(sigma)
    a = np.asarray(a, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    f = _axis_factors(a, sigma)
    # each outer symbol's SCP factorises into (near + far) per axis
    per_bit = {b: f[b, True] + f[b, False] for b in (0, 1)}
    scp_sum = sum(per_bit[o >> 1] * per_bit[o & 1] for o in range(4))
    out = 1.0 - scp_sum / 4.0
    return float(out) if np.ndim(out) == 0 else out
