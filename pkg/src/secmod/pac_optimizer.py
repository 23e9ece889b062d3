"""Power allocation under an eavesdropper SEP floor.

Solves ``min SEP_leg(a)  s.t.  SEP_eve(a) >= b`` over ``a`` in (0, 0.5).
``SEP_eve`` falls with ``a``, so the feasible set is ``(0, a_max]`` where
``a_max`` is the root of ``SEP_eve(a) = b``.

Two selection policies are offered:

``"boundary"`` (default)
    Report ``a_max``, the largest PAC the leakage constraint allows. This is
    the point where the constraint binds, and it maximises the outer-layer
    SNR ``a * P / sigma_leg**2``.
``"min-sep"``
    Report the minimiser of ``SEP_leg`` over ``(0, a_max]``. When that
    minimiser is interior (``SEP_leg`` bottoms out near ``a = 0.205`` at
    20 dB) the constraint is slack and the status is ``ConstraintNonBinding``.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from secmod.errors import MonotonicityError
from secmod.sep_analytics import sep, sigma_from_snr

A_LO = 1e-9
A_HI = 0.5 - 1e-9
GRID_STEP = 1e-4
BISECT_XTOL = 1e-12
SEP_TOL = 1e-6
CHANCE_SEP = 0.75


class PacStatus(str, Enum):
    ACTIVE = "ConstraintActive"
    NON_BINDING = "ConstraintNonBinding"
    INFEASIBLE = "Infeasible"


POLICIES = ("boundary", "min-sep")


@dataclass(frozen=True)
class PacQuery:
    snr_leg: float
    snr_eve: float
    msep_b: float

    def __post_init__(self):
        if not 0.0 < self.msep_b < CHANCE_SEP:
            raise ValueError(f"MSEP threshold must lie in (0, 0.75), got {self.msep_b}")
        if not (np.isfinite(self.snr_leg) and np.isfinite(self.snr_eve)):
            raise ValueError("SNR values must be finite")


@dataclass(frozen=True)
class PacSolution:
    query: PacQuery
    a: Optional[float]
    sep_leg: Optional[float]
    sep_eve: Optional[float]
    status: PacStatus
    a_max: Optional[float] = None
    policy: str = "boundary"

    @property
    def active(self):
        return self.status is PacStatus.ACTIVE

    def table_cell(self, digits=3):
        """PAC as printed in a table: fixed decimals, ``'-'`` unless the constraint is active."""
        return f"{self.a:.{digits}f}" if self.active else "-"


def pac_grid(lo=GRID_STEP, hi=A_HI, step=GRID_STEP):
    """Dense PAC grid ``lo, lo+step, ...`` not exceeding ``hi``."""
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)


def check_eve_monotone(sigma_eve, grid=None, tol=1e-12):
    """Raise :class:`MonotonicityError` unless SEP_eve is nonincreasing on the grid."""
    grid = pac_grid() if grid is None else grid
    rises = np.diff(sep(grid, sigma_eve))
    if np.any(rises > tol):
        i = int(np.argmax(rises))
        raise MonotonicityError(
            f"SEP_eve rises by {rises[i]:.3g} between a={grid[i]:.4f} and a={grid[i + 1]:.4f}")


def bisect_root(f, lo, hi, xtol=BISECT_XTOL, maxiter=200):
    """Root of a decreasing ``f`` with ``f(lo) >= 0 > f(hi)``; returns the feasible end."""
    for _ in range(maxiter):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        if f(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    return lo


def minimize_sep(sigma, lo, hi, step=GRID_STEP):
    """Minimiser of ``sep(., sigma)`` on ``[lo, hi]``: dense grid, then bounded Brent."""
    grid = pac_grid(lo, hi, step)
    if grid[-1] < hi:
        grid = np.append(grid, hi)
    values = sep(grid, sigma)
    i = int(np.argmin(values))
    best_a, best_v = float(grid[i]), float(values[i])
    left, right = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    if right > left:
        res = minimize_scalar(lambda x: sep(x, sigma), bounds=(left, right),
                              method="bounded", options={"xatol": 1e-10})
        if res.success and res.fun < best_v:
            best_a, best_v = float(res.x), float(res.fun)
    return best_a, best_v


def solve(query, policy="boundary"):
    """Optimal PAC for one (SNR_leg, SNR_eve, b) query."""
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    s_leg = sigma_from_snr(query.snr_leg)
    s_eve = sigma_from_snr(query.snr_eve)
    check_eve_monotone(s_eve)
    b = query.msep_b

    def slack(a):
        return sep(a, s_eve) - b

    if slack(A_HI) >= 0.0:
        a, v = minimize_sep(s_leg, GRID_STEP, A_HI)
        return PacSolution(query, a, v, sep(a, s_eve), PacStatus.NON_BINDING, None, policy)
    if slack(A_LO) < 0.0:
        return PacSolution(query, None, None, None, PacStatus.INFEASIBLE, None, policy)

    a_max = bisect_root(slack, A_LO, A_HI)
    status = PacStatus.ACTIVE
    a = a_max
    if policy == "min-sep" and a_max > GRID_STEP:
        a_opt, v_opt = minimize_sep(s_leg, GRID_STEP, a_max)
        if v_opt < sep(a_max, s_leg) and a_opt < a_max - GRID_STEP:
            a, status = a_opt, PacStatus.NON_BINDING
    return PacSolution(query, a, sep(a, s_leg), sep(a, s_eve), status, a_max, policy)


def sep_curve(snr, a_grid):
    """``[(a, SEP(a, sigma(snr))), ...]`` for plotting or CSV export."""
    a_grid = np.asarray(a_grid, dtype=float)
    if a_grid.size == 0:
        return []
    values = sep(a_grid, sigma_from_snr(snr))
    return list(zip(a_grid.tolist(), np.atleast_1d(values).tolist()))


def pac_table(snr_leg, snr_eve_list, b_list, policy="boundary", workers=1):
    """One solution per (SNR_eve, b) pair, SNR_eve-major in input order."""
    queries = [PacQuery(snr_leg, e, b) for e in snr_eve_list for b in b_list]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda q: solve(q, policy), queries))
    return [solve(q, policy) for q in queries]
