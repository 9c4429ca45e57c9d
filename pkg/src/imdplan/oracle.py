"""Time-domain polynomial amplifier simulator and windowed tone extraction.

This is the brute-force counterpart to the closed-form power/phase laws in
:mod:`imdplan.model`: tones are synthesized as real voltage traces, pushed
through a memoryless polynomial, and spur powers/phases are read back by
projecting the windowed trace onto complex exponentials at the exact
requested frequencies (no FFT-grid rounding).  It also implements the
shot-averaged gain/noise estimators used for saturation and efficiency
analysis.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .model import AmplifierModel, ToneSet
from .units import DEFAULT_Z0, POWER_FLOOR_DBM, amplitude_volts, watts_to_dbm

#: 4-term minimum-sidelobe Blackman-Harris coefficients (~ -92 dB sidelobes).
BLACKMAN_HARRIS_4TERM = (0.35875, 0.48829, 0.14128, 0.01168)

WINDOWS = ("none", "blackman_harris_4term")


@dataclass(frozen=True)
class TraceConfig:
    sample_rate: float = 1.8e9  # samples / s
    duration: float = 2.275e-6  # s (4095 samples at the default rate)
    window: str = "blackman_harris_4term"

    def __post_init__(self) -> None:
        if self.n_samples < 16:
            raise ValueError("trace must contain at least 16 samples")
        if self.window not in WINDOWS:
            raise ValueError(f"unknown window {self.window!r}")

    @property
    def n_samples(self) -> int:
        return int(round(self.sample_rate * self.duration))


@dataclass
class TimeTrace:
    samples: np.ndarray  # volts
    sample_rate: float

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate

    def times(self) -> np.ndarray:
        return np.arange(len(self.samples)) / self.sample_rate


@dataclass(frozen=True)
class ToneEstimate:
    freq_hz: float
    power_dbm: float
    phase_rad: float


@dataclass(frozen=True)
class GainNoiseEstimate:
    gain: float  # linear power ratio
    noise: float  # watts
    shots: int


def window_samples(window: str, n: int) -> np.ndarray:
    if window == "none":
        return np.ones(n)
    if window == "blackman_harris_4term":
        a0, a1, a2, a3 = BLACKMAN_HARRIS_4TERM
        x = 2.0 * np.pi * np.arange(n) / n
        return a0 - a1 * np.cos(x) + a2 * np.cos(2 * x) - a3 * np.cos(3 * x)
    raise ValueError(f"unknown window {window!r}")


def _check_nyquist(freqs_hz, sample_rate: float) -> None:
    for f in freqs_hz:
        if abs(f) >= sample_rate / 2.0:
            raise ValueError(
                f"frequency {f:.6g} Hz violates Nyquist at {sample_rate:.6g} S/s"
            )


def synthesize_trace(
    tones: ToneSet | None,
    cfg: TraceConfig,
    noise_std: float = 0.0,
    seed: int | None = None,
    z0: float = DEFAULT_Z0,
) -> TimeTrace:
    """Sum-of-cosines voltage trace with optional seeded white Gaussian noise."""
    n = cfg.n_samples
    t = np.arange(n) / cfg.sample_rate
    x = np.zeros(n)
    if tones is not None:
        all_tones = tones.all_tones()
        _check_nyquist([tone.freq_hz for tone in all_tones], cfg.sample_rate)
        for tone in all_tones:
            amp = amplitude_volts(tone.power_dbm, z0)
            x += amp * np.cos(2.0 * np.pi * tone.freq_hz * t + tone.phase_rad)
    if noise_std > 0.0:
        rng = np.random.default_rng(seed)
        x = x + rng.normal(0.0, noise_std, size=n)
    return TimeTrace(samples=x, sample_rate=cfg.sample_rate)


def apply_nonlinearity(
    trace: TimeTrace, model: AmplifierModel, quintic: float = 0.0
) -> TimeTrace:
    """Sample-wise ``y = sqrt(G) * (x - k x^3 + k5 x^5)``."""
    x = trace.samples
    y = x - model.k * x**3
    if quintic != 0.0:
        y = y + quintic * x**5
    return TimeTrace(samples=math.sqrt(model.gain_lin) * y, sample_rate=trace.sample_rate)


def extract_tones(
    trace: TimeTrace,
    freqs_hz,
    window: str = "blackman_harris_4term",
    z0: float = DEFAULT_Z0,
) -> list[ToneEstimate]:
    """Windowed projection of the trace onto exact requested frequencies.

    Corrects for the window's coherent gain so a pure tone's power is
    recovered.  Frequencies closer together than twice the trace's
    resolution bandwidth cannot be separated and are rejected.
    """
    freqs = sorted(float(f) for f in freqs_hz)
    _check_nyquist(freqs, trace.sample_rate)
    min_sep = 2.0 / trace.duration
    for fa, fb in zip(freqs, freqs[1:]):
        if fb - fa < min_sep:
            raise ValueError(
                f"frequencies {fa:.6g} and {fb:.6g} Hz are closer than the "
                f"{min_sep:.6g} Hz resolution limit"
            )

    w = window_samples(window, len(trace.samples))
    coherent_gain = w.sum()
    wx = w * trace.samples
    t = trace.times()
    out = []
    for f in freqs_hz:
        c = np.sum(wx * np.exp(-2j * np.pi * float(f) * t))
        amp = 2.0 * abs(c) / coherent_gain
        power = watts_to_dbm(amp * amp / (2.0 * z0))
        phase = float(np.angle(c)) % (2.0 * np.pi) if amp > 0.0 else 0.0
        if power <= POWER_FLOOR_DBM:
            power = POWER_FLOOR_DBM
        out.append(ToneEstimate(freq_hz=float(f), power_dbm=power, phase_rad=phase))
    return out


def integrated_amplitude(
    trace: TimeTrace,
    freq_hz: float,
    weights: np.ndarray | None = None,
    z0: float = DEFAULT_Z0,
) -> complex:
    """Weighted down-converted amplitude, scaled so |A|^2 is power in watts."""
    n = len(trace.samples)
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    if len(w) != n:
        raise ValueError("integration weights must match the trace length")
    t = trace.times()
    c = np.sum(w * trace.samples * np.exp(-2j * np.pi * freq_hz * t))
    amp = 2.0 * c / w.sum()
    return complex(amp / math.sqrt(2.0 * z0))


def estimate_gain_noise(
    shots: list[TimeTrace],
    freq_hz: float,
    applied_power_dbm: float,
    weights: np.ndarray | None = None,
    z0: float = DEFAULT_Z0,
) -> GainNoiseEstimate:
    """Shot-averaged signal gain and noise power at one frequency.

    Gain is ``|<A>|^2 / p`` against the applied power and noise is the
    variance ``<|A|^2> - |<A>|^2`` of the integrated amplitudes, in watts.
    """
    if len(shots) < 2:
        raise ValueError("gain/noise estimation requires at least 2 shots")
    amps = np.array(
        [integrated_amplitude(tr, freq_hz, weights=weights, z0=z0) for tr in shots]
    )
    mean = amps.mean()
    p_lin = 1e-3 * 10.0 ** (applied_power_dbm / 10.0)
    gain = abs(mean) ** 2 / p_lin
    # centered form so identical shots give exactly zero noise
    noise = float(np.mean(np.abs(amps - mean) ** 2))
    return GainNoiseEstimate(gain=gain, noise=noise, shots=len(shots))


def efficiency_change(est: GainNoiseEstimate, ref: GainNoiseEstimate) -> float:
    """Change in measurement efficiency in dB relative to a reference point."""
    if ref.gain <= 0.0 or ref.noise <= 0.0:
        raise ValueError("reference gain and noise must be positive")
    return 10.0 * math.log10(est.gain / ref.gain) - 10.0 * math.log10(
        est.noise / ref.noise
    )


# ---------------------------------------------------------------------------
# Trace file exchange: CSV samples plus a JSON sidecar with the metadata.
# ---------------------------------------------------------------------------

def write_trace(path: str | Path, trace: TimeTrace, z0: float = DEFAULT_Z0) -> None:
    path = Path(path)
    complex_valued = np.iscomplexobj(trace.samples)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_s", "i_v", "q_v"] if complex_valued else ["t_s", "v"])
        for t, v in zip(trace.times(), trace.samples):
            if complex_valued:
                writer.writerow([repr(float(t)), repr(float(v.real)), repr(float(v.imag))])
            else:
                writer.writerow([repr(float(t)), repr(float(v))])
    sidecar = path.with_suffix(path.suffix + ".meta.json")
    sidecar.write_text(
        json.dumps({"sample_rate": trace.sample_rate, "z0": z0}, indent=2) + "\n"
    )


def read_trace(path: str | Path) -> tuple[TimeTrace, float]:
    """Read a trace CSV and its metadata sidecar; returns (trace, z0)."""
    path = Path(path)
    sidecar = path.with_suffix(path.suffix + ".meta.json")
    if not sidecar.exists():
        raise FileNotFoundError(f"missing trace metadata sidecar {sidecar}")
    meta = json.loads(sidecar.read_text())
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    if header == ["t_s", "v"]:
        samples = np.array([float(r[1]) for r in rows])
    elif header == ["t_s", "i_v", "q_v"]:
        samples = np.array([float(r[1]) + 1j * float(r[2]) for r in rows])
    else:
        raise ValueError(f"unrecognized trace CSV header {header} in {path}")
    return TimeTrace(samples=samples, sample_rate=float(meta["sample_rate"])), float(
        meta["z0"]
    )
