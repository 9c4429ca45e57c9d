"""Signal-band geometry: product class bands and the pump-avoidance condition."""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SignalBand:
    """The frequency interval containing all multiplexed readout tones."""

    f_min_hz: float
    f_max_hz: float

    def __post_init__(self) -> None:
        if not (self.f_min_hz < self.f_max_hz):
            raise ValueError("signal band requires f_min < f_max")

    @property
    def width_hz(self) -> float:
        return self.f_max_hz - self.f_min_hz

    def contains(self, freq_hz: float) -> bool:
        return self.f_min_hz <= freq_hz <= self.f_max_hz


@dataclass(frozen=True)
class ProductClass:
    """A family of products: pump coefficient plus a sign per signal slot.

    ``signs`` is a tuple of +1/-1, one entry per signal photon, e.g.
    ``ProductClass(n_p=1, signs=(+1, -1))`` is the family ``f_p + f_i - f_j``.
    The family's signal order equals the number of slots.
    """

    n_p: int
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError("class signs must be +1 or -1")
        if self.n_p == 0 and not self.signs:
            raise ValueError("empty product class")

    @property
    def signal_order(self) -> int:
        return len(self.signs)


def class_band(cls: ProductClass, band: SignalBand, pump_hz: float) -> tuple[float, float]:
    """Frequency interval swept by a product class over all signal placements.

    Each + slot ranges over [f_min, f_max] and each - slot over
    [-f_max, -f_min]; before folding the width is ``O_s * band.width_hz``.
    Intervals reaching below zero are folded onto the physical axis.
    """
    lo = cls.n_p * pump_hz
    hi = cls.n_p * pump_hz
    for s in cls.signs:
        if s > 0:
            lo += band.f_min_hz
            hi += band.f_max_hz
        else:
            lo -= band.f_max_hz
            hi -= band.f_min_hz
    if hi <= 0.0:
        lo, hi = -hi, -lo
    elif lo < 0.0:
        lo, hi = 0.0, max(-lo, hi)
    return lo, hi


def pump_condition_satisfied(band: SignalBand, pump_hz: float) -> bool:
    """True iff the pump clears the signal band of all f_i +/- (f_p - f_j) spurs.

    The condition is ``f_p > 2 f_max - f_min``: the pump must be detuned
    from the band edge by more than the band width.
    """
    if not math.isfinite(pump_hz):
        raise ValueError("pump frequency must be finite")
    return pump_hz > 2.0 * band.f_max_hz - band.f_min_hz
