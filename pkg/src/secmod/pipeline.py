"""End-to-end payload transmission over the Bob/Eve wiretap link.

Source bytes are split into two-bit labels (most significant bits first),
mapped to outer 4-QAM symbols, superposed on a random inner layer and sent
over both AWGN channels. Each receiver strips the inner layer, makes quadrant
decisions and reassembles bytes. There is no source codec: every reported
MSE/PSNR is for this raw mapping and is tagged ``"codec": "raw-mapping"``.
"""

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from secmod import rng
from secmod.channel import ChannelSpec, transmit
from secmod.constellation import (ALPHABET, bits_to_labels, check_pac, detect_outer,
                                  labels_to_bits, random_inner, recover_outer, superpose)
from secmod.errors import PacStatusError
from secmod.montecarlo import plugin_mi
from secmod.pac_optimizer import POLICIES, PacQuery, solve
from secmod.sep_analytics import q_function, sep, sigma_from_snr

PAYLOAD_KINDS = ("random-bits", "raw-bytes", "raw-image")
PIXEL_MAX = 255.0


@dataclass(frozen=True)
class TransmitConfig:
    snr_leg: float
    snr_eve: float
    msep_b: Optional[float] = None
    pac_a: Optional[float] = None
    seed: int = 0
    payload_kind: str = "random-bits"
    n_symbols: int = 0
    width: Optional[int] = None
    height: Optional[int] = None
    superposition_enabled: bool = True
    # Eve's true SNR when it differs from the design value used for the PAC
    snr_eve_actual: Optional[float] = None
    policy: str = "boundary"

    def __post_init__(self):
        rng.check_seed(self.seed)
        if self.payload_kind not in PAYLOAD_KINDS:
            raise ValueError(f"payload_kind must be one of {PAYLOAD_KINDS}, got {self.payload_kind!r}")
        if self.policy not in POLICIES:
            raise ValueError(f"policy must be one of {POLICIES}, got {self.policy!r}")
        if self.payload_kind == "random-bits" and self.n_symbols < 1:
            raise ValueError("random-bits payloads need n_symbols >= 1")
        if self.payload_kind == "raw-image" and not (self.width and self.height
                                                     and self.width > 0 and self.height > 0):
            raise ValueError("raw-image payloads need positive width and height")
        if self.superposition_enabled:
            if self.pac_a is not None:
                check_pac(self.pac_a)
            elif self.msep_b is None:
                raise ValueError("superposition needs either pac_a or msep_b")

    @classmethod
    def from_mapping(cls, mapping):
        """Build from string values, e.g. parsed ``key = value`` config lines."""
        kw = {}
        for key, raw in mapping.items():
            if key not in _PARSERS:
                raise ValueError(f"unknown config key {key!r}")
            kw[key] = _PARSERS[key](raw) if isinstance(raw, str) else raw
        return cls(**kw)

    @property
    def eve_snr_in_channel(self):
        return self.snr_eve if self.snr_eve_actual is None else self.snr_eve_actual


def _parse_bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _optional(parse):
    def inner(text):
        return None if text.strip().lower() in ("", "none", "null") else parse(text)
    return inner


_PARSERS = {
    "snr_leg": float,
    "snr_eve": float,
    "msep_b": _optional(float),
    "pac_a": _optional(float),
    "seed": int,
    "payload_kind": str.strip,
    "n_symbols": int,
    "width": _optional(int),
    "height": _optional(int),
    "superposition_enabled": _parse_bool,
    "snr_eve_actual": _optional(float),
    "policy": str.strip,
}


def parse_config_text(text):
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {n}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def sep_without_superposition(sigma):
    """SEP of plain unit-power 4-QAM with per-axis noise ``sigma``."""
    p = q_function(1.0 / (math.sqrt(2.0) * sigma))
    return 1.0 - (1.0 - p) ** 2


@dataclass
class ReceiverMetrics:
    symbol_errors: int
    bit_errors: int
    ser: float
    ber: float
    mi_bits: float
    mse: Optional[float] = None
    psnr: Optional[float] = None


@dataclass
class TransmissionReport:
    config: TransmitConfig
    n_symbols: int
    pad_bits: int
    pac_used: Optional[float]
    pac_status: Optional[str]
    sep_analytic: dict
    bob: ReceiverMetrics
    eve: ReceiverMetrics
    symbols_per_source_byte: Optional[float] = None

    def to_dict(self):
        return {
            "codec": "raw-mapping",
            "config": asdict(self.config),
            "n_symbols": self.n_symbols,
            "pad_bits": self.pad_bits,
            "symbols_per_source_byte": self.symbols_per_source_byte,
            "pac_used": self.pac_used,
            "pac_status": self.pac_status,
            "sep_analytic": dict(self.sep_analytic),
            "bob": asdict(self.bob),
            "eve": asdict(self.eve),
        }


def resolve_pac(config):
    """PAC in force for ``config`` and the solver status (``None`` when given directly)."""
    if not config.superposition_enabled:
        return None, None
    if config.pac_a is not None:
        return float(config.pac_a), None
    sol = solve(PacQuery(config.snr_leg, config.snr_eve, config.msep_b), policy=config.policy)
    if not sol.active:
        raise PacStatusError(
            f"MSEP {config.msep_b} at SNR pair ({config.snr_leg}, {config.snr_eve}) dB "
            f"gives status {sol.status.value}", sol)
    return sol.a, sol.status.value


def _receive(y, a, spec):
    z = transmit(y, spec)
    if a is not None:
        z = recover_outer(z, a)
    return detect_outer(z)


def _metrics(sent, decided, source=None, image=False):
    sym_err = int(np.count_nonzero(sent != decided))
    bits_tx, bits_rx = labels_to_bits(sent), labels_to_bits(decided)
    bit_err = int(np.count_nonzero(bits_tx != bits_rx))
    joint = np.bincount(4 * sent.astype(np.int64) + decided, minlength=16).reshape(4, 4)
    m = ReceiverMetrics(
        symbol_errors=sym_err, bit_errors=bit_err,
        ser=sym_err / sent.size, ber=bit_err / bits_tx.size,
        mi_bits=plugin_mi(joint).value_bits)
    if source is not None:
        recovered = np.packbits(bits_rx)[:source.size]
        m.mse = float(np.mean((source.astype(float) - recovered.astype(float)) ** 2))
        if image:
            m.psnr = None if m.mse == 0 else 10.0 * math.log10(PIXEL_MAX ** 2 / m.mse)
    return m


def transmit_labels(labels, config, source=None):
    """Run the link on outer labels; ``source`` is the byte payload they came from, if any."""
    labels = np.asarray(labels, dtype=np.uint8)
    n = labels.size
    if n == 0:
        raise ValueError("nothing to transmit")
    a, status = resolve_pac(config)
    outer = ALPHABET[labels]
    y = outer if a is None else superpose(outer, random_inner(n, config.seed), a)

    s_leg = sigma_from_snr(config.snr_leg)
    s_eve = sigma_from_snr(config.eve_snr_in_channel)
    bob = _receive(y, a, ChannelSpec(s_leg, config.seed, "bob"))
    eve = _receive(y, a, ChannelSpec(s_eve, config.seed, "eve"))

    if a is None:
        analytic = {"bob": sep_without_superposition(s_leg), "eve": sep_without_superposition(s_eve)}
    else:
        analytic = {"bob": sep(a, s_leg), "eve": sep(a, s_eve)}
    image = config.payload_kind == "raw-image"
    return TransmissionReport(
        config=config, n_symbols=n, pad_bits=0, pac_used=a, pac_status=status,
        sep_analytic=analytic,
        bob=_metrics(labels, bob, source, image),
        eve=_metrics(labels, eve, source, image),
        symbols_per_source_byte=None if source is None else n / source.size)


def transmit_payload(payload, config):
    """Send a byte payload (``raw-bytes`` / ``raw-image``) and score both receivers."""
    source = np.frombuffer(bytes(payload), dtype=np.uint8)
    if source.size == 0:
        raise ValueError("payload is empty")
    if config.payload_kind == "raw-image" and source.size != 3 * config.width * config.height:
        raise ValueError(
            f"raw-image payload must hold 3*{config.width}*{config.height} bytes, got {source.size}")
    # eight bits per byte always fill whole two-bit symbols, so no padding arises
    labels = bits_to_labels(np.unpackbits(source))
    return transmit_labels(labels, config, source=source)


def transmit_random(config):
    """Send ``config.n_symbols`` uniformly random outer labels."""
    labels = rng.labels(config.seed, rng.Stream.PAYLOAD, 0, config.n_symbols)
    return transmit_labels(labels, config)
