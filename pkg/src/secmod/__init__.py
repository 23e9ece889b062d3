"""Superposition-coded 4-QAM secure modulation.

Closed-form outer-layer SEP for a 4-QAM + 4-QAM superposition, power
allocation under an eavesdropper SEP floor, wiretap capacity gap analysis
and a seeded Monte-Carlo link simulator.
"""

from secmod.capacity import (CapacityReport, capacity_gap_curve, equivalent_snr_actual,
                             equivalent_snr_wiretap, wiretap_capacity)
from secmod.channel import ChannelSpec, transmit
from secmod.constellation import (ALPHABET, detect_outer, modulate_outer, random_inner,
                                  recover_outer, superpose)
from secmod.montecarlo import estimate_sep, plugin_mi, validate_closed_form
from secmod.pac_optimizer import PacQuery, PacSolution, PacStatus, pac_table, sep_curve, solve
from secmod.sep_analytics import SepBreakdown, q_function, scp_breakdown, sep, sigma_from_snr

__version__ = "0.1.0"

__all__ = [
    "ALPHABET", "CapacityReport", "ChannelSpec", "PacQuery", "PacSolution", "PacStatus",
    "SepBreakdown", "capacity_gap_curve", "detect_outer", "equivalent_snr_actual",
    "equivalent_snr_wiretap", "estimate_sep", "modulate_outer", "pac_table", "plugin_mi",
    "q_function", "random_inner", "recover_outer", "scp_breakdown", "sep", "sep_curve",
    "sigma_from_snr", "solve", "superpose", "transmit", "validate_closed_form",
    "wiretap_capacity",
]
