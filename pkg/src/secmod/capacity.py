"""Wiretap capacity and the equivalent-SNR price of the superposition scheme."""

import math
from dataclasses import dataclass
from typing import Optional

from secmod.errors import NoSecrecyMarginError, PacStatusError
from secmod.pac_optimizer import PacQuery, solve
from secmod.sep_analytics import TX_POWER, sigma_from_snr


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def linear_to_db(x):
    return 10.0 * math.log10(x)


def wiretap_capacity(snr_leg, snr_eve, bandwidth=1.0):
    """Secrecy capacity in bit/s: ``max(B log2(1+SNR_leg) - B log2(1+SNR_eve), 0)``."""
    if not bandwidth > 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth}")
    c = bandwidth * (math.log2(1.0 + db_to_linear(snr_leg))
                     - math.log2(1.0 + db_to_linear(snr_eve)))
    return max(c, 0.0)


def equivalent_snr_wiretap(snr_leg, snr_eve):
    """SNR (dB) of a plain AWGN link whose capacity equals the wiretap capacity."""
    ratio = (1.0 + db_to_linear(snr_leg)) / (1.0 + db_to_linear(snr_eve))
    if ratio <= 1.0:
        raise NoSecrecyMarginError(
            f"no secrecy margin: SNR_leg={snr_leg} dB does not exceed SNR_eve={snr_eve} dB")
    return linear_to_db(ratio - 1.0)


def equivalent_snr_actual(snr_leg, snr_eve, b, policy="boundary"):
    """Outer-layer SNR (dB) ``10 log10(a P / sigma_leg**2)`` at the optimal PAC for MSEP ``b``.

    ``sigma_leg`` is the per-axis standard deviation, so this equals
    ``10 log10(a) + snr_leg`` for unit power.
    """
    sol = solve(PacQuery(snr_leg, snr_eve, b), policy=policy)
    if not sol.active:
        raise PacStatusError(
            f"PAC for (SNR_leg={snr_leg}, SNR_eve={snr_eve}, b={b}) is {sol.status.value}", sol)
    return linear_to_db(sol.a * TX_POWER / sigma_from_snr(snr_leg) ** 2)


@dataclass(frozen=True)
class CapacityReport:
    snr_leg: float
    snr_eve: float
    msep_b: float
    bandwidth: float
    wiretap_capacity: float
    snr_equ_wiretap: Optional[float]
    snr_equ_actual: Optional[float]
    pac_a: Optional[float]

    @property
    def gap(self):
        if self.snr_equ_wiretap is None or self.snr_equ_actual is None:
            return None
        return self.snr_equ_wiretap - self.snr_equ_actual


def capacity_gap_curve(snr_leg_list, snr_eve, b_list, bandwidth=1.0, policy="boundary"):
    """One :class:`CapacityReport` per (SNR_leg, b); non-active PAC cells carry ``None``."""
    reports = []
    for snr_leg in snr_leg_list:
        cap = wiretap_capacity(snr_leg, snr_eve, bandwidth)
        try:
            equ_w = equivalent_snr_wiretap(snr_leg, snr_eve)
        except NoSecrecyMarginError:
            equ_w = None
        for b in b_list:
            sol = solve(PacQuery(snr_leg, snr_eve, b), policy=policy)
            equ_a = None
            if sol.active:
                equ_a = linear_to_db(sol.a * TX_POWER / sigma_from_snr(snr_leg) ** 2)
            reports.append(CapacityReport(
                snr_leg=snr_leg, snr_eve=snr_eve, msep_b=b, bandwidth=bandwidth,
                wiretap_capacity=cap, snr_equ_wiretap=equ_w, snr_equ_actual=equ_a,
                pac_a=sol.a if sol.active else None))
    return reports
