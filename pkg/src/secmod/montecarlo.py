"""Monte-Carlo estimates that cross-check the closed-form SEP.

Trials are split into the fixed index blocks of :mod:`secmod.rng`. Each
block is simulated on its own, so the totals do not depend on how blocks are
spread over workers.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import beta, norm

from secmod import rng
from secmod.channel import ChannelSpec, transmit
from secmod.constellation import ALPHABET, check_pac, detect_outer, recover_outer, superpose
from secmod.sep_analytics import sep as closed_form_sep
from secmod.sep_analytics import sigma_from_snr

Z_CI = 3.0
CI_LEVEL = 1.0 - 2.0 * norm.sf(Z_CI)  # 0.9973
EXACT_BELOW = 10


@dataclass(frozen=True)
class SepEstimate:
    trials: int
    errors: int
    point: float
    ci_low: float
    ci_high: float

    def contains(self, p):
        return bool(self.ci_low <= p <= self.ci_high)

    @property
    def width(self):
        return self.ci_high - self.ci_low


@dataclass(frozen=True)
class MiEstimate:
    value_bits: float
    joint_counts: np.ndarray = field(repr=False)


def binomial_ci(errors, trials, z=Z_CI):
    """Two-sided interval at the coverage of ``+-z`` standard errors.

    Normal approximation, except that Clopper-Pearson bounds are used when
    fewer than ten errors (or ten successes) were seen.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    if not 0 <= errors <= trials:
        raise ValueError("errors must lie in [0, trials]")
    p = errors / trials
    if errors < EXACT_BELOW or trials - errors < EXACT_BELOW:
        alpha = 2.0 * norm.sf(z)
        lo = 0.0 if errors == 0 else float(beta.ppf(alpha / 2, errors, trials - errors + 1))
        hi = 1.0 if errors == trials else float(beta.ppf(1 - alpha / 2, errors + 1, trials - errors))
        return lo, hi
    half = z * np.sqrt(p * (1.0 - p) / trials)
    return max(p - half, 0.0), min(p + half, 1.0)


def _chunks(trials):
    return [(lo, min(lo + rng.BLOCK, trials)) for lo in range(0, trials, rng.BLOCK)]


def _simulate_chunk(a, sigma, seed, lo, hi):
    outer = rng.labels(seed, rng.Stream.OUTER, lo, hi)
    inner = rng.labels(seed, rng.Stream.INNER, lo, hi)
    y = superpose(ALPHABET[outer], ALPHABET[inner], a)
    z = transmit(y, ChannelSpec(sigma, seed, "eve"), offset=lo)
    decided = detect_outer(recover_outer(z, a))
    return np.bincount(4 * outer.astype(np.int64) + decided, minlength=16).reshape(4, 4)


def simulate_joint(a, sigma, trials, seed, workers=1):
    """4x4 counts of (sent outer label, decided outer label) over ``trials`` symbols."""
    check_pac(a)
    if trials < 1:
        raise ValueError("trials must be at least 1")
    chunks = _chunks(int(trials))

    def run(c):
        return _simulate_chunk(a, sigma, seed, *c)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    return np.sum(parts, axis=0, dtype=np.int64)


def estimate_from_counts(joint):
    joint = np.asarray(joint)
    trials = int(joint.sum())
    errors = trials - int(np.trace(joint))
    lo, hi = binomial_ci(errors, trials)
    return SepEstimate(trials, errors, errors / trials, lo, hi)


def estimate_sep(a, sigma, trials, seed, workers=1):
    """Simulated outer-layer SEP with a 99.7% confidence interval."""
    return estimate_from_counts(simulate_joint(a, sigma, trials, seed, workers))


def plugin_mi(joint_counts):
    """Plug-in mutual information (bits) of an empirical joint count table."""
    c = np.asarray(joint_counts, dtype=float)
    if c.ndim != 2 or np.any(c < 0):
        raise ValueError("joint counts must be a nonnegative 2-D table")
    total = c.sum()
    if total <= 0:
        raise ValueError("joint counts are all zero")
    p = c / total
    px = p.sum(axis=1, keepdims=True)
    py = p.sum(axis=0, keepdims=True)
    nz = p > 0
    mi = float(np.sum(p[nz] * np.log2(p[nz] / (px @ py)[nz])))
    return MiEstimate(max(mi, 0.0), np.asarray(joint_counts))


@dataclass(frozen=True)
class ValidationCell:
    a: float
    snr_db: float
    sigma: float
    analytic: float
    estimate: SepEstimate

    @property
    def passed(self):
        return self.estimate.contains(self.analytic)


@dataclass(frozen=True)
class ValidationReport:
    cells: list
    trials: int
    seed: int

    @property
    def passed(self):
        return all(c.passed for c in self.cells)


def validate_closed_form(grid, trials, seed, workers=1):
    """Check the closed-form SEP lies inside the simulated CI for each ``(a, snr_db)``.

    Cell ``i`` is simulated with a seed derived from ``(seed, i)``.
    """
    grid = list(grid)
    if not grid:
        raise ValueError("validation grid is empty")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    cells = []
    for i, (a, snr) in enumerate(grid):
        sigma = sigma_from_snr(snr)
        est = estimate_sep(a, sigma, trials, rng.derive_seed(seed, i), workers)
        cells.append(ValidationCell(float(a), float(snr), sigma, closed_form_sep(a, sigma), est))
    return ValidationReport(cells, int(trials), int(seed))
