"""Tone sets, intermodulation product enumeration and the empirical power/phase laws.

An intermodulation product of a pump at ``f_p`` and signals at ``f_1..f_N``
is identified by an integer coefficient vector ``(n_p, n_1..n_N)`` and sits
at ``|n_p*f_p + sum_i n_i*f_i|``.  Its power follows a per-signal power law
with exponents ``|n_i|``, parametrized by the amplifier gain and a per-order
intercept point; its phase is the signed sum of the signal phases plus a
product-specific offset.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .units import (
    DEFAULT_Z0,
    dbm_to_watts,
    fold_frequency,
    watts_to_dbm,
    wrap_phase,
)

MAX_ENUMERATION_ORDER = 15


@dataclass(frozen=True)
class Tone:
    """A single applied tone: frequency in Hz, power in dBm, phase in rad."""

    freq_hz: float
    power_dbm: float
    phase_rad: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.freq_hz):
            raise ValueError("tone frequency must be finite")
        object.__setattr__(self, "phase_rad", wrap_phase(self.phase_rad))

    @property
    def power_watts(self) -> float:
        return dbm_to_watts(self.power_dbm)


@dataclass(frozen=True)
class ToneSet:
    """A pump tone plus an ordered collection of signal tones."""

    pump: Tone
    signals: tuple[Tone, ...]

    def __post_init__(self) -> None:
        if len(self.signals) < 1:
            raise ValueError("at least one signal tone is required")
        freqs = [self.pump.freq_hz] + [t.freq_hz for t in self.signals]
        if len(set(freqs)) != len(freqs):
            raise ValueError("pump and signal frequencies must be distinct")

    @property
    def n_signals(self) -> int:
        return len(self.signals)

    def all_tones(self) -> tuple[Tone, ...]:
        return (self.pump,) + self.signals


@dataclass(frozen=True)
class IMProduct:
    """An intermodulation product identified by its coefficient vector."""

    n_p: int
    n: tuple[int, ...]
    freq_hz: float

    @property
    def total_order(self) -> int:
        return abs(self.n_p) + self.signal_order

    @property
    def signal_order(self) -> int:
        return sum(abs(c) for c in self.n)

    @classmethod
    def from_coefficients(
        cls, n_p: int, n: tuple[int, ...], pump_freq_hz: float, signal_freqs_hz
    ) -> "IMProduct":
        if n_p == 0 and not any(n):
            raise ValueError("coefficient vector must not be all zero")
        freq = n_p * pump_freq_hz + sum(c * f for c, f in zip(n, signal_freqs_hz))
        return cls(n_p=n_p, n=tuple(n), freq_hz=fold_frequency(freq))

    def coefficients(self) -> tuple[int, ...]:
        return (self.n_p,) + self.n


def canonical_coefficients(coeffs: tuple[int, ...]) -> tuple[int, ...]:
    """Pick the representative of {v, -v} whose first nonzero entry is positive."""
    for c in coeffs:
        if c > 0:
            return coeffs
        if c < 0:
            return tuple(-x for x in coeffs)
    raise ValueError("coefficient vector must not be all zero")


@dataclass(frozen=True)
class AmplifierModel:
    """Behavioral amplifier: gain, per-order intercept points, cubic coefficient.

    ``p_ip_dbm`` maps a signal order (>= 2) to the input-referred intercept
    point for products of that order; ``p_ip_overrides`` optionally pins the
    intercept for an individual coefficient vector.  ``theta_rad`` holds
    per-product phase offsets (default 0 when uncalibrated).
    """

    gain_db: float
    p_ip_dbm: dict[int, float] = field(default_factory=dict)
    k: float = 0.0  # cubic coefficient, 1/V^2
    z0: float = DEFAULT_Z0
    theta_rad: dict[tuple[int, ...], float] = field(default_factory=dict)
    p_ip_overrides: dict[tuple[int, ...], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not math.isfinite(self.gain_db):
            raise ValueError("gain must be finite")
        if self.k < 0.0:
            raise ValueError("cubic coefficient must be >= 0")
        for order, p in self.p_ip_dbm.items():
            if order < 2 or not math.isfinite(p):
                raise ValueError(f"invalid intercept point entry {order}: {p}")

    @property
    def gain_lin(self) -> float:
        return 10.0 ** (self.gain_db / 10.0)

    def intercept_dbm(self, prod: IMProduct) -> float:
        key = canonical_coefficients(prod.coefficients())
        if key in self.p_ip_overrides:
            return self.p_ip_overrides[key]
        order = prod.signal_order
        if order not in self.p_ip_dbm:
            raise ValueError(f"no intercept point configured for signal order {order}")
        return self.p_ip_dbm[order]

    def theta(self, prod: IMProduct) -> float:
        return self.theta_rad.get(canonical_coefficients(prod.coefficients()), 0.0)


def enumerate_products(
    tones: ToneSet,
    max_total_order: int,
    band=None,
    parity: str = "all",
) -> list[IMProduct]:
    """Enumerate canonical intermodulation products up to a total order.

    Conjugate coefficient vectors produce the same physical frequency and
    are emitted once, canonicalized so the first nonzero coefficient is
    positive.  ``band`` (optional :class:`~imdplan.bands.SignalBand`) keeps
    only products inside it; ``parity='odd_only'`` keeps odd total orders.
    Output is sorted by (signal order, total order, frequency).
    """
    if max_total_order < 1:
        raise ValueError("max_total_order must be >= 1")
    if max_total_order > MAX_ENUMERATION_ORDER:
        raise ValueError(f"max_total_order > {MAX_ENUMERATION_ORDER} refused")
    if parity not in ("all", "odd_only"):
        raise ValueError(f"unknown parity filter: {parity!r}")

    n_sig = tones.n_signals
    pump_f = tones.pump.freq_hz
    sig_f = [t.freq_hz for t in tones.signals]
    rng = range(-max_total_order, max_total_order + 1)

    products = []
    for coeffs in itertools.product(rng, repeat=1 + n_sig):
        order = sum(abs(c) for c in coeffs)
        if order < 1 or order > max_total_order:
            continue
        if coeffs != canonical_coefficients(coeffs):
            continue
        prod = IMProduct.from_coefficients(coeffs[0], coeffs[1:], pump_f, sig_f)
        if parity == "odd_only" and prod.total_order % 2 == 0:
            continue
        if band is not None and not (band.f_min_hz <= prod.freq_hz <= band.f_max_hz):
            continue
        products.append(prod)

    products.sort(key=lambda p: (p.signal_order, p.total_order, p.freq_hz))
    return products


def product_power_watts(model: AmplifierModel, tones: ToneSet, prod: IMProduct) -> float:
    """Linear-domain evaluation of the empirical product power law."""
    order = prod.signal_order
    if order < 1:
        raise ValueError("power law applies to products with signal order >= 1")
    power = model.gain_lin
    for coeff, tone in zip(prod.n, tones.signals):
        power *= tone.power_watts ** abs(coeff)
    if order >= 2:
        p_ip = dbm_to_watts(model.intercept_dbm(prod))
        power *= p_ip ** (1 - order)
    return power


def product_power(model: AmplifierModel, tones: ToneSet, prod: IMProduct) -> float:
    """Predicted output power of a product in dBm.

    In the log domain the law reads
    ``P = G + (1 - O_s) * p_IP(O_s) + sum_i |n_i| * p_i`` with all powers in
    dBm; a signal-order-1 product reduces to plain gain on its tone.
    """
    return watts_to_dbm(product_power_watts(model, tones, prod))


def product_phase(model: AmplifierModel, tones: ToneSet, prod: IMProduct) -> float:
    """Predicted phase ``sum_i n_i * phi_i + theta`` reduced to [0, 2*pi).

    The phase law applies to the coefficient orientation whose signed
    frequency is positive; a product stored with a negative signed frequency
    (folded onto the physical axis) contributes with negated coefficients.
    """
    signed = prod.n_p * tones.pump.freq_hz + sum(
        c * t.freq_hz for c, t in zip(prod.n, tones.signals)
    )
    flip = -1.0 if signed < 0.0 else 1.0
    phase = flip * model.theta(prod)
    for coeff, tone in zip(prod.n, tones.signals):
        phase += flip * coeff * tone.phase_rad
    return wrap_phase(phase)


# Fractional gain drop at the 1 dB compression point, 1 - 10^(-1/20).
_ONE_DB_AMPLITUDE_DROP = 1.0 - 10.0 ** (-1.0 / 20.0)


def saturation_gain(model: AmplifierModel, input_power_dbm: float) -> float:
    """Effective single-tone gain in dB of the cubic saturation model.

    The cubic acting on a sinusoid of amplitude A compresses the
    fundamental by the factor ``1 - (3/4) k A^2``; the model is out of its
    domain once that factor reaches zero.
    """
    if model.k <= 0.0 or model.z0 <= 0.0:
        raise ValueError("saturation model requires k > 0 and z0 > 0")
    a_sq = 2.0 * dbm_to_watts(input_power_dbm) * model.z0
    drop = 0.75 * model.k * a_sq
    if drop >= 1.0:
        raise ValueError(
            f"input power {input_power_dbm:.2f} dBm beyond the cubic model's domain"
        )
    return model.gain_db + 20.0 * math.log10(1.0 - drop)


def compression_point(model: AmplifierModel) -> float:
    """Input power (dBm) at which the single-tone gain has dropped by 1 dB."""
    if model.k <= 0.0:
        raise ValueError("compression point requires k > 0")
    a_sq = 4.0 * _ONE_DB_AMPLITUDE_DROP / (3.0 * model.k)
    return watts_to_dbm(a_sq / (2.0 * model.z0))


def ip3_point(model: AmplifierModel) -> float:
    """Input-referred third-order intercept power (dBm) of the cubic model.

    The extrapolated two-tone third-order product, with amplitude
    coefficient ``(3/4) k A^3``, meets the linear fundamental at
    ``A^2 = 4 / (3 k)``; the guaranteed offset from the 1 dB compression
    point is ``10 log10(1 / (1 - 10^(-1/20))) ~= 9.64 dB``.
    """
    if model.k <= 0.0:
        raise ValueError("intercept point requires k > 0")
    a_sq = 4.0 / (3.0 * model.k)
    return watts_to_dbm(a_sq / (2.0 * model.z0))
