"""Time-domain simulator: synthesis, extraction, estimators, trace files."""
import math

import numpy as np
import pytest

from imdplan import (
    AmplifierModel,
    Tone,
    ToneSet,
    apply_nonlinearity,
    compression_point,
    estimate_gain_noise,
    extract_tones,
    efficiency_change,
    ip3_point,
    saturation_gain,
    synthesize_trace,
)
from imdplan.oracle import (
    GainNoiseEstimate,
    TimeTrace,
    TraceConfig,
    integrated_amplitude,
    read_trace,
    window_samples,
    write_trace,
)
from imdplan.units import amplitude_volts, dbm_to_watts

from conftest import (
    BIN_HZ,
    F1,
    F2,
    FP,
    GAIN_DB,
    bench_products,
    bench_tones,
    oriented_coeffs,
)


def single_tone(freq, power_dbm, phase=0.0):
    # a lone signal needs a far-away pump partner to form a valid tone set
    return ToneSet(pump=Tone(freq + 50e6, -300.0), signals=(Tone(freq, power_dbm, phase),))


class TestSynthesis:
    def test_empty_trace_is_zero(self, bench_cfg):
        trace = synthesize_trace(None, bench_cfg)
        assert np.all(trace.samples == 0.0)
        assert trace.duration == pytest.approx(bench_cfg.duration)

    def test_peak_amplitude_matches_power(self, bench_cfg):
        trace = synthesize_trace(single_tone(F1, -90.0), bench_cfg)
        assert np.max(np.abs(trace.samples)) == pytest.approx(
            amplitude_volts(-90.0), rel=1e-6
        )

    def test_nyquist_rejected(self, bench_cfg):
        with pytest.raises(ValueError):
            synthesize_trace(single_tone(260e6, -90.0), bench_cfg)

    def test_noise_is_seeded(self, bench_cfg):
        a = synthesize_trace(None, bench_cfg, noise_std=1e-6, seed=5)
        b = synthesize_trace(None, bench_cfg, noise_std=1e-6, seed=5)
        c = synthesize_trace(None, bench_cfg, noise_std=1e-6, seed=6)
        assert np.array_equal(a.samples, b.samples)
        assert not np.array_equal(a.samples, c.samples)


class TestExtraction:
    def test_pure_tone_power_and_phase(self, bench_cfg):
        trace = synthesize_trace(single_tone(F1, -90.0, 0.3), bench_cfg)
        est = extract_tones(trace, [F1], window="none")[0]
        assert est.power_dbm == pytest.approx(-90.0, abs=0.01)
        assert est.phase_rad == pytest.approx(0.3, abs=1e-6)

    def test_windowed_extraction_recovers_power(self):
        # off-grid tone with the tapered window: coherent gain corrected
        cfg = TraceConfig(sample_rate=500e6, duration=2**14 / 500e6)
        f = 41.234567e6
        trace = synthesize_trace(single_tone(f, -90.0), cfg)
        est = extract_tones(trace, [f])[0]
        assert est.power_dbm == pytest.approx(-90.0, abs=0.01)

    def test_leakage_below_minus_90_dbc(self, bench_cfg):
        # a neighbor at >= 8 bins leaks less than -90 dBc into the readout
        cfg = TraceConfig(sample_rate=500e6, duration=2**14 / 500e6)
        f_strong = 41.0e6 + 0.37 * BIN_HZ  # deliberately off-grid
        f_probe = f_strong + 8.0 * BIN_HZ
        trace = synthesize_trace(single_tone(f_strong, -60.0), cfg)
        est = extract_tones(trace, [f_probe])[0]
        assert est.power_dbm < -60.0 - 90.0

    def test_resolution_limit_enforced(self, bench_cfg):
        trace = synthesize_trace(single_tone(F1, -90.0), bench_cfg)
        with pytest.raises(ValueError):
            extract_tones(trace, [F1, F1 + 1.5 * BIN_HZ], window="none")

    def test_zero_trace_reports_floor(self, bench_cfg):
        trace = synthesize_trace(None, bench_cfg)
        est = extract_tones(trace, [F1], window="none")[0]
        assert est.power_dbm == -300.0

    def test_windowed_parseval(self, bench_cfg):
        # the DFT of the windowed trace carries the same energy as the
        # windowed samples (orthogonality sanity check on the projection)
        rng = np.random.default_rng(2)
        x = rng.normal(size=bench_cfg.n_samples)
        w = window_samples("blackman_harris_4term", len(x))
        spec = np.fft.rfft(w * x)
        lhs = np.sum((w * x) ** 2)
        n = len(x)
        rhs = (np.sum(np.abs(spec) ** 2) * 2.0 - np.abs(spec[0]) ** 2) / n
        if n % 2 == 0:
            rhs -= np.abs(spec[-1]) ** 2 / n
        assert lhs == pytest.approx(rhs, rel=1e-9)


class TestNonlinearity:
    def test_linear_control_generates_nothing(self, bench_cfg):
        # with k = 0 every non-input frequency stays below -200 dBc
        model = AmplifierModel(gain_db=GAIN_DB, k=0.0)
        tones = bench_tones(-70.0, -73.0)
        out = apply_nonlinearity(synthesize_trace(tones, bench_cfg), model)
        prods = [p for p in bench_products(bench_cfg) if p.total_order >= 3]
        for est in extract_tones(out, [p.freq_hz for p in prods], window="none"):
            assert est.power_dbm < -70.0 - 200.0

    def test_cubic_parity(self, bench_cfg):
        # a cubic creates no even-total-order products, e.g. nothing at f1+f2
        model = AmplifierModel(gain_db=GAIN_DB, k=2e4)
        tones = bench_tones(-60.0, -60.0)
        out = apply_nonlinearity(synthesize_trace(tones, bench_cfg), model)
        est = extract_tones(out, [F1 + F2], window="none")[0]
        assert est.power_dbm < -250.0

    def test_third_harmonic_amplitude(self, bench_cfg, bench_model):
        # y = sqrt(G)(x - k x^3) puts (1/4) k A^3 at the third harmonic
        p_in = -60.0
        a = amplitude_volts(p_in)
        tones = single_tone(F1, p_in)
        out = apply_nonlinearity(synthesize_trace(tones, bench_cfg), bench_model)
        est = extract_tones(out, [3.0 * F1], window="none")[0]
        expect = math.sqrt(bench_model.gain_lin) * 0.25 * bench_model.k * a**3
        got = amplitude_volts(est.power_dbm)
        assert got == pytest.approx(expect, rel=1e-6)

    def test_power_law_slopes(self, bench_cfg, bench_model):
        # log-log slope of each product vs a joint signal sweep equals its
        # signal order
        prods = bench_products(bench_cfg)
        freqs = [p.freq_hz for p in prods]
        p1db = compression_point(bench_model)
        xs = np.linspace(p1db - 40.0, p1db - 20.0, 7)
        powers = []
        for p1 in xs:
            tones = bench_tones(p1, p1 - 3.0)
            out = apply_nonlinearity(synthesize_trace(tones, bench_cfg), bench_model)
            powers.append([e.power_dbm for e in extract_tones(out, freqs, window="none")])
        slopes = np.polyfit(xs, np.asarray(powers), 1)[0]
        for prod, slope in zip(prods, slopes):
            assert slope == pytest.approx(prod.signal_order, abs=0.02 * max(1, prod.signal_order))

    def test_phase_offsets_are_constant(self, bench_cfg, bench_model):
        # residual phase after subtracting the signed signal-phase sum is a
        # per-product constant over a small phase grid
        prods = bench_products(bench_cfg)
        freqs = [p.freq_hz for p in prods]
        grid = np.linspace(0.0, 2.0 * np.pi, 4, endpoint=False)
        residuals = [[] for _ in prods]
        for a in grid:
            for b in grid:
                tones = bench_tones(-70.0, -73.0, float(a), float(b))
                out = apply_nonlinearity(synthesize_trace(tones, bench_cfg), bench_model)
                for i, (prod, est) in enumerate(
                    zip(prods, extract_tones(out, freqs, window="none"))
                ):
                    m = oriented_coeffs(prod)
                    residuals[i].append(est.phase_rad - (m[0] * a + m[1] * b))
        for prod, res in zip(prods, residuals):
            res = np.asarray(res)
            dev = np.angle(np.exp(1j * (res - res[0])))
            assert np.max(np.abs(dev)) < 1e-6
            if prod.total_order == 3:
                # cubic mixing offset is pi (sign of the -k x^3 term)
                theta = np.angle(np.mean(np.exp(1j * res)))
                assert abs(abs(theta) - np.pi) < 1e-6

    def test_saturation_matches_closed_form(self, bench_cfg, bench_model):
        p1db = compression_point(bench_model)
        for p_in in (p1db - 30.0, p1db - 10.0, p1db):
            tones = single_tone(F1, p_in)
            out = apply_nonlinearity(synthesize_trace(tones, bench_cfg), bench_model)
            est = extract_tones(out, [F1], window="none")[0]
            assert est.power_dbm - p_in == pytest.approx(
                saturation_gain(bench_model, p_in), abs=0.05
            )

    def test_two_tone_ip3_extrapolation(self, bench_cfg, bench_model):
        p_in = compression_point(bench_model) - 20.0
        tones = bench_tones(p_in, p_in)
        out = apply_nonlinearity(synthesize_trace(tones, bench_cfg), bench_model)
        fund, im3 = extract_tones(out, [F1, 2.0 * F1 - F2], window="none")
        ip3_est = p_in + (fund.power_dbm - im3.power_dbm) / 2.0
        assert ip3_est == pytest.approx(ip3_point(bench_model), abs=0.1)


class TestEstimators:
    def test_deterministic_shots_have_zero_noise(self, bench_cfg, bench_model):
        tones = single_tone(F1, -80.0)
        out = apply_nonlinearity(synthesize_trace(tones, bench_cfg), bench_model)
        est = estimate_gain_noise([out, out, out], F1, -80.0)
        assert est.noise == 0.0
        assert 10.0 * math.log10(est.gain) == pytest.approx(GAIN_DB, abs=0.01)

    def test_integrated_amplitude_power_scale(self, bench_cfg):
        trace = synthesize_trace(single_tone(F1, -85.0), bench_cfg)
        amp = integrated_amplitude(trace, F1)
        assert abs(amp) ** 2 == pytest.approx(dbm_to_watts(-85.0), rel=1e-6)

    def test_injected_noise_variance_recovered(self, bench_cfg):
        sigma_v = 2e-7
        n = bench_cfg.n_samples
        shots = [
            synthesize_trace(single_tone(F1, -85.0), bench_cfg, noise_std=sigma_v, seed=s)
            for s in range(2**10)
        ]
        est = estimate_gain_noise(shots, F1, -85.0)
        # white sample noise of variance sigma^2 maps to a complex amplitude
        # variance of 2 sigma^2 / (n z0); allow 3 sigma statistical slack
        expect = 2.0 * sigma_v**2 / (n * 50.0)
        assert est.noise == pytest.approx(expect, rel=3.0 / math.sqrt(2**10))

    def test_efficiency_change_geometry(self):
        ref = GainNoiseEstimate(gain=100.0, noise=1e-18, shots=10)
        est = GainNoiseEstimate(
            gain=100.0 * 10.0 ** (-0.1), noise=1e-18 * 10.0 ** (0.55), shots=10
        )
        # gain down 1 dB and noise up 5.5 dB lose 6.5 dB of efficiency
        assert efficiency_change(est, ref) == pytest.approx(-6.5, abs=1e-9)

    def test_requires_two_shots(self, bench_cfg):
        trace = synthesize_trace(single_tone(F1, -85.0), bench_cfg)
        with pytest.raises(ValueError):
            estimate_gain_noise([trace], F1, -85.0)


class TestTraceFiles:
    def test_real_roundtrip(self, tmp_path, bench_cfg):
        trace = synthesize_trace(single_tone(F1, -90.0), bench_cfg)
        path = tmp_path / "trace.csv"
        write_trace(path, trace, z0=50.0)
        back, z0 = read_trace(path)
        assert z0 == 50.0
        assert back.sample_rate == trace.sample_rate
        assert np.array_equal(back.samples, trace.samples)
        assert (tmp_path / "trace.csv.meta.json").exists()

    def test_complex_roundtrip(self, tmp_path):
        trace = TimeTrace(
            samples=np.array([1.0 + 2.0j, -0.5 + 0.25j]), sample_rate=1e6
        )
        path = tmp_path / "iq.csv"
        write_trace(path, trace, z0=75.0)
        back, z0 = read_trace(path)
        assert z0 == 75.0
        assert np.array_equal(back.samples, trace.samples)

    def test_missing_sidecar_raises(self, tmp_path):
        path = tmp_path / "orphan.csv"
        path.write_text("t_s,v\n0.0,0.0\n")
        with pytest.raises(FileNotFoundError):
            read_trace(path)
