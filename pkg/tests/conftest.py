"""Shared fixtures: an on-grid time-domain test bench.

All frequencies are integer multiples of the trace's bin spacing and the
rectangular window is used, so distinct tones are exactly orthogonal and
extraction is limited only by floating-point roundoff.
"""
import numpy as np
import pytest

from imdplan import AmplifierModel, Tone, ToneSet, enumerate_products
from imdplan.oracle import TraceConfig

SAMPLE_RATE = 500e6
N_SAMPLES = 2**14
BIN_HZ = SAMPLE_RATE / N_SAMPLES

F1 = round(41.3e6 / BIN_HZ) * BIN_HZ
F2 = round(35.7e6 / BIN_HZ) * BIN_HZ
FP = round(47.9e6 / BIN_HZ) * BIN_HZ

CUBIC_K = 2e4
GAIN_DB = 18.4


@pytest.fixture(scope="session")
def bench_cfg() -> TraceConfig:
    return TraceConfig(
        sample_rate=SAMPLE_RATE, duration=N_SAMPLES / SAMPLE_RATE, window="none"
    )


@pytest.fixture(scope="session")
def bench_model() -> AmplifierModel:
    return AmplifierModel(gain_db=GAIN_DB, k=CUBIC_K)


def bench_tones(p1_dbm: float, p2_dbm: float, phi1: float = 0.0, phi2: float = 0.0) -> ToneSet:
    return ToneSet(
        pump=Tone(FP, -62.0),
        signals=(Tone(F1, p1_dbm, phi1), Tone(F2, p2_dbm, phi2)),
    )


def bench_products(cfg: TraceConfig):
    """Cubic-generated products observable on the bench: odd total order up
    to 3, at least one signal photon, below Nyquist and resolvable."""
    prods = enumerate_products(bench_tones(-70.0, -73.0), 3, parity="odd_only")
    return [
        p
        for p in prods
        if p.signal_order >= 1 and 2.0 / cfg.duration < p.freq_hz < cfg.sample_rate / 2.0
    ]


def oriented_coeffs(prod) -> tuple[int, ...]:
    """Signal coefficients oriented so the signed product frequency is positive."""
    signed = prod.n_p * FP + prod.n[0] * F1 + prod.n[1] * F2
    return tuple(-c for c in prod.n) if signed < 0.0 else prod.n
