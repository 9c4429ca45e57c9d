"""End-to-end CLI runs: every subcommand, output schemas, reproducibility."""
import csv
import json

import numpy as np
import pytest

from imdplan import Tone, ToneSet, synthesize_trace
from imdplan.cli import coeff_label, main
from imdplan.config import load_config, parse_config, ConfigError
from imdplan.oracle import TraceConfig, write_trace
from imdplan.reports import read_report

from conftest import F1, F2, FP, N_SAMPLES, SAMPLE_RATE

BASE_CONFIG = {
    "band": {"f_min_ghz": 6.4, "f_max_ghz": 7.4},
    "pump": {"freq_ghz": 7.92, "power_dbm": -62.0},
    "signals": [
        {"freq_ghz": 7.5551, "power_dbm": -106.0, "phase_rad": 0.3},
        {"freq_ghz": 7.1924, "power_dbm": -109.0, "phase_rad": 1.1},
    ],
    "amplifier": {"gain_db": 17.2, "p_ip2_dbm": -91.0, "p_ip3_dbm": -88.0,
                  "k_per_v2": 20000.0},
    "policy": {"delta_min_mhz": 5.0, "signal_orders": [2], "max_pump_order": 2},
    "mc": {"samples": 200, "seed": 1, "n_values": [2, 4], "delta_min_mhz": [1.0, 5.0]},
    "plan": {"n": 4, "min_spacing_mhz": 20.0, "seed": 0},
    "enumerate": {"max_total_order": 5, "odd_only": False},
    "oracle": {"sample_rate_hz": 5e8, "duration_s": 3.2768e-5, "window": "none",
               "freq_scale": 0.006, "sweep_start_dbm": -85.0,
               "sweep_stop_dbm": -75.0, "sweep_points": 3, "phase_grid_points": 2},
    "readout": {
        "qutrits": [
            {"f_r_ghz": 7.5501, "kappa_mhz": 10.0, "chi_mhz": 5.0,
             "tone_power_dbm": -105.0},
            {"f_r_ghz": 7.1874, "kappa_mhz": 10.0, "chi_mhz": 5.0,
             "tone_power_dbm": -100.0},
        ],
        "noise_ref_dbm": -147.0,
        "shots": 200,
        "seed": 3,
    },
    "lines": [4, 4],
    "analyze": {"window": "none"},
}


@pytest.fixture()
def config_path(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(BASE_CONFIG, indent=2))
    return path


def run(config_path, out_dir, *args):
    return main(["--config", str(config_path), "--out", str(out_dir), *map(str, args)])


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestEnumerate:
    def test_writes_products_table(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main(["enumerate", "--config", str(config_path), "--out", str(out)]) == 0
        rows = read_csv(out / "products.csv")
        assert rows[0] == ["n_p", "n_1", "n_2", "freq_ghz", "o_t", "o_s",
                           "power_dbm", "phase_rad"]
        assert len(rows) > 1

    def test_band_and_order_filters(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main([
            "enumerate", "--config", str(config_path), "--out", str(out),
            "--max-order", "5", "--band", "6.25,7.55", "--odd-only",
        ]) == 0
        rows = read_csv(out / "products.csv")
        assert len(rows) - 1 == 9

    def test_byte_identical_reruns(self, config_path, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["enumerate", "--config", str(config_path), "--out", str(out_a)])
        main(["enumerate", "--config", str(config_path), "--out", str(out_b)])
        assert (out_a / "products.csv").read_bytes() == (out_b / "products.csv").read_bytes()

    def test_json_lines_format(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main([
            "enumerate", "--config", str(config_path), "--out", str(out),
            "--format", "json-lines",
        ]) == 0
        lines = (out / "products.jsonl").read_text().splitlines()
        rec = json.loads(lines[0])
        assert {"n_p", "n_1", "n_2", "freq_ghz"} <= set(rec)


class TestPowerAndBands:
    def test_power_sweep(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main(["power", "--config", str(config_path), "--out", str(out)]) == 0
        rows = read_csv(out / "power_sweep.csv")
        assert rows[0][0] == "p1_dbm"
        assert len(rows) > 1

    def test_bands_with_plot(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main([
            "bands", "--config", str(config_path), "--out", str(out),
            "--pump-points", "5", "--plot",
        ]) == 0
        assert (out / "class_bands.csv").exists()
        assert (out / "class_bands.png").stat().st_size > 0


class TestCheck:
    def test_reports_known_collision(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main(["check", "--config", str(config_path), "--out", str(out)]) == 0
        rows = read_csv(out / "collisions.csv")
        header, body = rows[0], rows[1:]
        assert header[:4] == ["n_p", "n_1", "n_2", "freq_ghz"]
        detunings = [float(r[header.index("detuning_mhz")]) for r in body]
        assert any(abs(d - 2.2) < 0.01 for d in detunings)


class TestMC:
    def test_table_and_report(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main(["mc", "--config", str(config_path), "--out", str(out)]) == 0
        rows = read_csv(out / "mc_collisions.csv")
        assert rows[0] == ["n", "delta_min_hz", "p_coll", "stderr"]
        assert len(rows) == 1 + 2 * 2  # two N values x two detunings
        report = read_report(out / "mc_report.json")
        assert report["tool"] == "imdplan"
        assert report["command"] == "mc"
        assert report["seed"] == 1
        assert "surface_code_failure" in report["results"]
        # embedded config parses back to the same configuration
        assert parse_config(report["config"]).raw == BASE_CONFIG

    def test_reruns_and_thread_env_identical(self, config_path, tmp_path, monkeypatch):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["mc", "--config", str(config_path), "--out", str(out_a)])
        monkeypatch.setenv("IMDPLAN_THREADS", "4")
        main(["mc", "--config", str(config_path), "--out", str(out_b)])
        assert (out_a / "mc_collisions.csv").read_bytes() == (
            out_b / "mc_collisions.csv"
        ).read_bytes()
        ra = read_report(out_a / "mc_report.json")
        rb = read_report(out_b / "mc_report.json")
        assert ra["results"] == rb["results"]

    def test_seed_override_changes_results(self, config_path, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["mc", "--config", str(config_path), "--out", str(out_a)])
        main(["mc", "--config", str(config_path), "--out", str(out_b), "--seed", "99"])
        assert read_report(out_b / "mc_report.json")["seed"] == 99

    def test_plot(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main(["mc", "--config", str(config_path), "--out", str(out), "--plot"]) == 0
        assert (out / "mc_collisions.png").stat().st_size > 0

    def test_invalid_thread_env(self, config_path, tmp_path, monkeypatch):
        monkeypatch.setenv("IMDPLAN_THREADS", "lots")
        assert main(["mc", "--config", str(config_path), "--out", str(tmp_path / "o")]) == 2


class TestPlan:
    def test_plan_outputs(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main(["plan", "--config", str(config_path), "--out", str(out)]) == 0
        rows = read_csv(out / "plan.csv")
        assert rows[0] == ["index", "freq_ghz"]
        assert len(rows) == 1 + 4
        report = read_report(out / "plan_report.json")
        assert report["results"]["valid"] is True
        assert report["results"]["residual_collisions"] == []
        for f in report["results"]["assigned_hz"]:
            assert 6.4e9 <= f <= 7.4e9


class TestOracle:
    def test_oracle_sweeps(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main(["oracle", "--config", str(config_path), "--out", str(out)]) == 0
        for stem in ("oracle_power_sweep", "oracle_phase_grid", "oracle_saturation"):
            rows = read_csv(out / f"{stem}.csv")
            assert len(rows) > 1
        sat = read_csv(out / "oracle_saturation.csv")
        assert sat[0] == ["p_in_dbm", "gain_db", "model_gain_db"]


class TestReadout:
    def test_readout_outputs(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main([
            "readout", "--config", str(config_path), "--out", str(out), "--shots-table",
        ]) == 0
        fid = read_csv(out / "cross_fidelity.csv")
        assert fid[0] == ["prepared_qutrit", "classified_qutrit", "fidelity"]
        assert len(fid) == 1 + 4
        shifts = read_csv(out / "mean_shifts.csv")
        assert shifts[0] == ["prep_1", "prep_2", "qutrit", "shift_re", "shift_im"]
        shots = read_csv(out / "shots_q1.csv")
        assert shots[0] == ["prep_1", "prep_2", "q_re", "q_im", "assigned"]
        assert len(shots) == 1 + 9 * 200
        report = read_report(out / "readout_report.json")
        assert np.asarray(report["results"]["fidelity"]).shape == (2, 2)

    def test_deterministic(self, config_path, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["readout", "--config", str(config_path), "--out", str(out_a)])
        main(["readout", "--config", str(config_path), "--out", str(out_b)])
        assert (out_a / "cross_fidelity.csv").read_bytes() == (
            out_b / "cross_fidelity.csv"
        ).read_bytes()


class TestAnalyze:
    def test_gain_and_zero_noise_from_synthetic_traces(self, tmp_path):
        # noiseless identical shots: exact gain, exactly zero noise
        cfg = {
            "pump": {"freq_ghz": FP / 1e9, "power_dbm": -300.0},
            "signals": [{"freq_ghz": F1 / 1e9, "power_dbm": -90.0}],
            "analyze": {"window": "none"},
        }
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps(cfg))
        trace_cfg = TraceConfig(
            sample_rate=SAMPLE_RATE, duration=N_SAMPLES / SAMPLE_RATE, window="none"
        )
        tones = ToneSet(pump=Tone(FP, -300.0), signals=(Tone(F1, -70.0),))
        trace = synthesize_trace(tones, trace_cfg)
        paths = []
        for i in range(2):
            p = tmp_path / f"shot{i}.csv"
            write_trace(p, trace)
            paths.append(str(p))
        out = tmp_path / "out"
        assert main(["analyze", "--config", str(config), "--out", str(out), *paths]) == 0
        rows = read_csv(out / "gain_noise.csv")
        assert rows[0] == ["freq_hz", "gain_lin", "gain_db", "noise_w", "eff_change_db"]
        gain_db = float(rows[1][2])
        assert gain_db == pytest.approx(20.0, abs=0.01)
        assert float(rows[1][3]) == 0.0


class TestValidation:
    def test_unknown_key_rejected(self, tmp_path):
        bad = dict(BASE_CONFIG)
        bad["amplifier"] = {**BASE_CONFIG["amplifier"], "gian_db": 17.2}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(bad))
        assert main(["enumerate", "--config", str(path), "--out", str(tmp_path)]) == 2

    def test_missing_file_rejected(self, tmp_path):
        assert main([
            "enumerate", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)
        ]) == 2

    def test_empty_signals_rejected(self, tmp_path):
        bad = {**BASE_CONFIG, "signals": []}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(bad))
        assert main(["enumerate", "--config", str(path), "--out", str(tmp_path)]) == 2

    def test_invalid_json_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["check", "--config", str(path), "--out", str(tmp_path)]) == 2

    def test_config_error_names_offending_key(self, tmp_path):
        with pytest.raises(ConfigError, match="policy.delta_min_mhz"):
            parse_config({"policy": {}})

    def test_load_config_roundtrip(self, config_path):
        cfg = load_config(config_path)
        assert cfg.raw == BASE_CONFIG
        assert cfg.band.f_min_hz == 6.4e9
        assert cfg.mc.samples == 200
        assert cfg.readout.shots == 200


class TestLabels:
    def test_coeff_labels(self):
        assert coeff_label(1, (-1, 1)) == "+fp-f1+f2"
        assert coeff_label(0, (2, -3)) == "+2f1-3f2"
        assert coeff_label(-2, (0, 1)) == "-2fp+f2"
