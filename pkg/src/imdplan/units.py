"""Unit conversions between dBm, watts, volt amplitudes and radians."""
from __future__ import annotations

import math

TWO_PI = 2.0 * math.pi

#: Reference impedance used for power <-> amplitude conversion, ohms.
DEFAULT_Z0 = 50.0

#: Reporting floor for powers of zero-amplitude tones, dBm.
POWER_FLOOR_DBM = -300.0


def dbm_to_watts(dbm: float) -> float:
    return 1e-3 * 10.0 ** (dbm / 10.0)


def watts_to_dbm(watts: float) -> float:
    if watts <= 0.0:
        return POWER_FLOOR_DBM
    return 10.0 * math.log10(watts / 1e-3)


def amplitude_volts(power_dbm: float, z0: float = DEFAULT_Z0) -> float:
    """Peak amplitude of a sinusoid carrying the given power into z0."""
    return math.sqrt(2.0 * dbm_to_watts(power_dbm) * z0)


def amplitude_to_dbm(amp_volts: float, z0: float = DEFAULT_Z0) -> float:
    return watts_to_dbm(amp_volts * amp_volts / (2.0 * z0))


def wrap_phase(phase: float) -> float:
    """Reduce a phase to [0, 2*pi)."""
    wrapped = math.fmod(phase, TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    # fmod of a tiny negative number can round up to exactly 2*pi
    if wrapped >= TWO_PI:
        wrapped -= TWO_PI
    return wrapped


def fold_frequency(freq_hz: float) -> float:
    """Fold a signed spur frequency onto the physical single-sided axis."""
    return abs(freq_hz)
