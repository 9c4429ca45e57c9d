"""Command-line entry points.

Subcommands: enumerate | power | bands | check | mc | plan | oracle |
readout | analyze.  Each reads a JSON config, writes delimited tables (and
JSON reports for the randomized commands) into --out, and optionally
renders figures next to them with --plot.  All randomized commands are
bit-reproducible for a fixed seed; IMDPLAN_THREADS caps the worker count
without affecting results.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bands import ProductClass, SignalBand, class_band
from .collisions import (
    CollisionPolicy,
    MCConfig,
    detect_collisions,
    mc_collision_probability,
    plan_frequencies,
    surface_code_failure,
)
from .config import ConfigError, load_config
from .model import (
    AmplifierModel,
    Tone,
    ToneSet,
    enumerate_products,
    product_phase,
    product_power,
    saturation_gain,
)
from .oracle import (
    TraceConfig,
    apply_nonlinearity,
    efficiency_change,
    estimate_gain_noise,
    extract_tones,
    read_trace,
    synthesize_trace,
)
from .readout import simulate_readout
from .reports import ReportTimer, write_report, write_table

GHZ = 1e9
MHZ = 1e6


def coeff_label(n_p: int, n: tuple[int, ...]) -> str:
    """Human-readable product label like '+fp-f1+f2'."""
    parts = []
    for coeff, name in [(n_p, "fp")] + [
        (c, f"f{i + 1}") for i, c in enumerate(n)
    ]:
        if coeff == 0:
            continue
        sign = "+" if coeff > 0 else "-"
        mag = "" if abs(coeff) == 1 else str(abs(coeff))
        parts.append(f"{sign}{mag}{name}")
    return "".join(parts)


def _table_path(out_dir: Path, stem: str, fmt: str) -> Path:
    return out_dir / (stem + (".csv" if fmt == "csv" else ".jsonl"))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_enumerate(args) -> int:
    cfg = load_config(args.config)
    tones = cfg.tone_set()
    opts = cfg.enumerate_opts or {"max_total_order": 5, "odd_only": False}
    max_order = args.max_order if args.max_order is not None else opts["max_total_order"]
    odd_only = args.odd_only or opts["odd_only"]
    band = cfg.band
    if args.band is not None:
        lo, hi = (float(x) for x in args.band.split(","))
        band = SignalBand(lo * GHZ, hi * GHZ)
    products = enumerate_products(
        tones, max_order, band=band, parity="odd_only" if odd_only else "all"
    )
    n_sig = tones.n_signals
    header = (
        ["n_p"]
        + [f"n_{i + 1}" for i in range(n_sig)]
        + ["freq_ghz", "o_t", "o_s", "power_dbm", "phase_rad"]
    )
    rows = []
    for prod in products:
        power = phase = ""
        if cfg.amplifier is not None and prod.signal_order >= 1:
            try:
                power = product_power(cfg.amplifier, tones, prod)
                phase = product_phase(cfg.amplifier, tones, prod)
            except ValueError:
                pass  # no intercept configured for this signal order
        rows.append(
            [prod.n_p, *prod.n, prod.freq_hz / GHZ, prod.total_order,
             prod.signal_order, power, phase]
        )
    path = _table_path(args.out, "products", args.format)
    write_table(path, header, rows, fmt=args.format)
    print(f"wrote {len(rows)} products to {path}")
    return 0


def cmd_power(args) -> int:
    cfg = load_config(args.config)
    tones = cfg.tone_set()
    model = cfg.require("amplifier")
    opts = cfg.enumerate_opts or {"max_total_order": 3, "odd_only": False}
    oracle_opts = cfg.oracle or {}
    start = oracle_opts.get("sweep_start_dbm", -130.0)
    stop = oracle_opts.get("sweep_stop_dbm", -105.0)
    points = oracle_opts.get("sweep_points", 11)
    offsets = [s.power_dbm - tones.signals[0].power_dbm for s in tones.signals]

    products = enumerate_products(tones, opts["max_total_order"])
    products = [p for p in products if 1 <= p.signal_order]
    header = ["p1_dbm", "label", "n_p"] + [
        f"n_{i + 1}" for i in range(tones.n_signals)
    ] + ["freq_ghz", "o_s", "power_dbm"]
    rows = []
    plot_rows = []
    for p1 in np.linspace(start, stop, points):
        swept = ToneSet(
            pump=tones.pump,
            signals=tuple(
                Tone(s.freq_hz, p1 + off, s.phase_rad)
                for s, off in zip(tones.signals, offsets)
            ),
        )
        for prod in products:
            try:
                power = product_power(model, swept, prod)
            except ValueError:
                continue
            label = coeff_label(prod.n_p, prod.n)
            rows.append(
                [float(p1), label, prod.n_p, *prod.n, prod.freq_hz / GHZ,
                 prod.signal_order, power]
            )
            plot_rows.append({"p1_dbm": float(p1), "label": label, "power_dbm": power})
    path = _table_path(args.out, "power_sweep", args.format)
    write_table(path, header, rows, fmt=args.format)
    if args.plot:
        from .plotting import save_power_sweep_figure

        save_power_sweep_figure(args.out / "power_sweep.png", plot_rows)
    print(f"wrote {len(rows)} rows to {path}")
    return 0


def _default_classes(max_signal_order: int, max_pump_order: int) -> list[ProductClass]:
    classes = []
    for o_s in range(1, max_signal_order + 1):
        for n_plus in range(o_s + 1):
            signs = (1,) * n_plus + (-1,) * (o_s - n_plus)
            for n_p in range(-max_pump_order, max_pump_order + 1):
                if n_p == 0 and n_plus == o_s == 1:
                    continue  # the signal band itself is drawn separately
                first = n_p if n_p != 0 else (1 if n_plus else -1)
                if first < 0:
                    continue  # conjugate family, same folded band
                classes.append(ProductClass(n_p=n_p, signs=signs))
    return classes


def cmd_bands(args) -> int:
    cfg = load_config(args.config)
    band = cfg.require("band")
    max_os = max(cfg.policy.signal_orders) if cfg.policy else 3
    max_np = cfg.policy.max_pump_order if cfg.policy else 2
    if cfg.policy and cfg.policy.classes:
        classes = list(cfg.policy.classes)
    else:
        classes = _default_classes(max_os, max_np)
    pumps = np.linspace(args.pump_start_ghz, args.pump_stop_ghz, args.pump_points)
    header = ["pump_ghz", "label", "n_p", "o_s", "lo_ghz", "hi_ghz"]
    rows = []
    plot_rows = []
    for pump_ghz in pumps:
        for cls in classes:
            lo, hi = class_band(cls, band, pump_ghz * GHZ)
            label = coeff_label(cls.n_p, cls.signs)
            rows.append(
                [float(pump_ghz), label, cls.n_p, cls.signal_order, lo / GHZ, hi / GHZ]
            )
            plot_rows.append(
                {
                    "pump_ghz": float(pump_ghz),
                    "label": label,
                    "o_s": cls.signal_order,
                    "lo_ghz": lo / GHZ,
                    "hi_ghz": hi / GHZ,
                }
            )
    path = _table_path(args.out, "class_bands", args.format)
    write_table(path, header, rows, fmt=args.format)
    if args.plot:
        from .plotting import save_bands_figure

        save_bands_figure(args.out / "class_bands.png", plot_rows, band)
    print(f"wrote {len(rows)} rows to {path}")
    return 0


def cmd_check(args) -> int:
    cfg = load_config(args.config)
    tones = cfg.tone_set()
    policy = cfg.require("policy")
    freqs = [s.freq_hz for s in tones.signals]
    collisions = detect_collisions(freqs, tones.pump.freq_hz, policy)
    n_sig = len(freqs)
    header = (
        ["n_p"]
        + [f"n_{i + 1}" for i in range(n_sig)]
        + ["freq_ghz", "signal_index", "signal_freq_ghz", "detuning_mhz"]
    )
    rows = [
        [c.product.n_p, *c.product.n, c.product.freq_hz / GHZ, c.signal_index,
         freqs[c.signal_index] / GHZ, c.detuning_hz / MHZ]
        for c in collisions
    ]
    path = _table_path(args.out, "collisions", args.format)
    write_table(path, header, rows, fmt=args.format)
    print(f"{len(collisions)} collision(s); wrote {path}")
    return 0


def cmd_mc(args) -> int:
    timer = ReportTimer()
    cfg = load_config(args.config)
    policy = cfg.require("policy")
    mc_cfg = cfg.require("mc")
    if args.seed is not None:
        mc_cfg = MCConfig(
            pump_hz=mc_cfg.pump_hz,
            band=mc_cfg.band,
            samples=mc_cfg.samples,
            min_spacing_hz=mc_cfg.min_spacing_hz,
            n_values=mc_cfg.n_values,
            delta_values_hz=mc_cfg.delta_values_hz,
            seed=args.seed,
        )
    table = mc_collision_probability(mc_cfg, policy)
    header = ["n", "delta_min_hz", "p_coll", "stderr"]
    rows = []
    for i, n in enumerate(table.n_values):
        for j, delta in enumerate(table.delta_values_hz):
            rows.append([n, float(delta), float(table.p_coll[i, j]),
                         float(table.stderr[i, j])])
    path = _table_path(args.out, "mc_collisions", args.format)
    write_table(path, header, rows, fmt=args.format)

    results = {
        "n_values": list(table.n_values),
        "delta_values_hz": list(table.delta_values_hz),
        "p_coll": table.p_coll.tolist(),
        "stderr": table.stderr.tolist(),
        "samples": table.samples,
    }
    if cfg.lines:
        results["line_sizes"] = cfg.lines
        results["surface_code_failure"] = {
            f"{delta:.0f}": surface_code_failure(
                cfg.lines, delta, mc_cfg.pump_hz, policy, mc_cfg
            )
            for delta in table.delta_values_hz
        }
    write_report(
        args.out / "mc_report.json", "mc", cfg.raw, mc_cfg.seed, results,
        timer.elapsed_s(), __version__,
    )
    if args.plot:
        from .plotting import save_mc_figure

        save_mc_figure(args.out / "mc_collisions.png", table)
    print(f"wrote {path} and {args.out / 'mc_report.json'}")
    return 0


def cmd_plan(args) -> int:
    timer = ReportTimer()
    cfg = load_config(args.config)
    band = cfg.require("band")
    policy = cfg.require("policy")
    pump = cfg.require("pump")
    opts = cfg.require("plan")
    seed = args.seed if args.seed is not None else opts["seed"]
    plan = plan_frequencies(
        n=opts["n"],
        band=band,
        policy=policy,
        pump_hz=pump.freq_hz,
        min_spacing_hz=opts["min_spacing_hz"],
        max_iters=opts["max_iters"],
        seed=seed,
    )
    write_table(
        _table_path(args.out, "plan", args.format),
        ["index", "freq_ghz"],
        [[i, f / GHZ] for i, f in enumerate(plan.assigned_hz)],
        fmt=args.format,
    )
    results = {
        "assigned_hz": list(plan.assigned_hz),
        "pump_hz": plan.pump_hz,
        "valid": plan.valid,
        "residual_collisions": [
            {
                "n_p": c.product.n_p,
                "n": list(c.product.n),
                "freq_hz": c.product.freq_hz,
                "signal_index": c.signal_index,
                "detuning_hz": c.detuning_hz,
            }
            for c in plan.residual_collisions
        ],
    }
    write_report(
        args.out / "plan_report.json", "plan", cfg.raw, seed, results,
        timer.elapsed_s(), __version__,
    )
    status = "valid" if plan.valid else f"{len(plan.residual_collisions)} residual collision(s)"
    print(f"plan {status}; wrote {args.out / 'plan_report.json'}")
    return 0


def _scaled_tones(tones: ToneSet, scale: float) -> ToneSet:
    if scale == 1.0:
        return tones
    return ToneSet(
        pump=Tone(tones.pump.freq_hz * scale, tones.pump.power_dbm, tones.pump.phase_rad),
        signals=tuple(
            Tone(s.freq_hz * scale, s.power_dbm, s.phase_rad) for s in tones.signals
        ),
    )


def _resolvable_products(products, trace_cfg: TraceConfig):
    """Keep products below Nyquist and mutually separated by the resolution
    limit, preferring lower orders when two products overlap."""
    min_sep = 2.0 / trace_cfg.duration
    kept = []
    for prod in sorted(products, key=lambda p: (p.total_order, p.signal_order)):
        if prod.freq_hz >= trace_cfg.sample_rate / 2.0 or prod.freq_hz < min_sep:
            continue
        if all(abs(prod.freq_hz - k.freq_hz) >= min_sep for k in kept):
            kept.append(prod)
    return kept


def cmd_oracle(args) -> int:
    cfg = load_config(args.config)
    tones = cfg.tone_set()
    model = cfg.require("amplifier")
    opts = cfg.oracle or {}
    opts = {**{"sample_rate_hz": 1.8e9, "duration_s": 2.275e-6,
               "window": "blackman_harris_4term", "noise_std_v": 0.0,
               "quintic_per_v4": 0.0, "freq_scale": 1.0, "seed": 0,
               "sweep_start_dbm": -130.0, "sweep_stop_dbm": -105.0,
               "sweep_points": 11, "p2_offset_db": -3.0,
               "phase_grid_points": 8}, **opts}
    seed = args.seed if args.seed is not None else opts["seed"]
    trace_cfg = TraceConfig(
        sample_rate=opts["sample_rate_hz"],
        duration=opts["duration_s"],
        window=opts["window"],
    )
    tones = _scaled_tones(tones, opts["freq_scale"])
    window = opts["window"]
    quintic = opts["quintic_per_v4"]
    max_order = 5 if quintic else 3
    products = enumerate_products(tones, max_order, parity="odd_only")
    products = [p for p in products if p.signal_order >= 1]
    products = _resolvable_products(products, trace_cfg)
    n_sig = tones.n_signals

    def run_once(tone_set: ToneSet, shot_seed: int):
        trace = synthesize_trace(
            tone_set, trace_cfg, noise_std=opts["noise_std_v"], seed=shot_seed,
            z0=model.z0,
        )
        out = apply_nonlinearity(trace, model, quintic=quintic)
        return extract_tones(out, [p.freq_hz for p in products], window=window,
                             z0=model.z0)

    # power-law sweep: all signals swept together, fixed offsets
    offsets = [s.power_dbm - tones.signals[0].power_dbm for s in tones.signals]
    if n_sig >= 2:
        offsets[1] = opts["p2_offset_db"]
    header = ["p1_dbm", "label", "n_p"] + [f"n_{i + 1}" for i in range(n_sig)] + [
        "freq_hz", "o_t", "o_s", "power_dbm", "phase_rad"]
    rows = []
    for p1 in np.linspace(opts["sweep_start_dbm"], opts["sweep_stop_dbm"],
                          opts["sweep_points"]):
        swept = ToneSet(
            pump=tones.pump,
            signals=tuple(Tone(s.freq_hz, p1 + off, s.phase_rad)
                          for s, off in zip(tones.signals, offsets)),
        )
        for prod, est in zip(products, run_once(swept, seed)):
            rows.append([float(p1), coeff_label(prod.n_p, prod.n), prod.n_p, *prod.n,
                         est.freq_hz, prod.total_order, prod.signal_order,
                         est.power_dbm, est.phase_rad])
    sweep_path = _table_path(args.out, "oracle_power_sweep", args.format)
    write_table(sweep_path, header, rows, fmt=args.format)

    # phase grid over the first two signals
    grid = np.linspace(0.0, 2.0 * np.pi, opts["phase_grid_points"], endpoint=False)
    phase_rows = []
    if n_sig >= 2:
        for phi1 in grid:
            for phi2 in grid:
                signals = list(tones.signals)
                signals[0] = Tone(signals[0].freq_hz, signals[0].power_dbm, float(phi1))
                signals[1] = Tone(signals[1].freq_hz, signals[1].power_dbm, float(phi2))
                swept = ToneSet(pump=tones.pump, signals=tuple(signals))
                for prod, est in zip(products, run_once(swept, seed)):
                    phase_rows.append(
                        [float(phi1), float(phi2), coeff_label(prod.n_p, prod.n),
                         prod.n_p, *prod.n, est.phase_rad])
    phase_path = _table_path(args.out, "oracle_phase_grid", args.format)
    write_table(phase_path,
                ["phi1_rad", "phi2_rad", "label", "n_p"]
                + [f"n_{i + 1}" for i in range(n_sig)] + ["phase_rad"],
                phase_rows, fmt=args.format)

    # single-tone saturation sweep on the first signal
    sat_rows = []
    sat_powers = np.linspace(opts["sweep_start_dbm"], opts["sweep_stop_dbm"] + 15.0, 31)
    first = tones.signals[0]
    for p_in in sat_powers:
        single = ToneSet(pump=tones.pump,
                         signals=(Tone(first.freq_hz, float(p_in), first.phase_rad),))
        trace = synthesize_trace(single, trace_cfg, noise_std=opts["noise_std_v"],
                                 seed=seed, z0=model.z0)
        out = apply_nonlinearity(trace, model, quintic=quintic)
        est = extract_tones(out, [first.freq_hz], window=window, z0=model.z0)[0]
        model_gain = ""
        if model.k > 0.0:
            try:
                model_gain = saturation_gain(model, float(p_in))
            except ValueError:
                model_gain = ""
        sat_rows.append([float(p_in), est.power_dbm - float(p_in), model_gain])
    sat_path = _table_path(args.out, "oracle_saturation", args.format)
    write_table(sat_path, ["p_in_dbm", "gain_db", "model_gain_db"], sat_rows,
                fmt=args.format)

    if args.plot:
        from .plotting import save_power_sweep_figure, save_saturation_figure

        save_power_sweep_figure(
            args.out / "oracle_power_sweep.png",
            [{"p1_dbm": r[0], "label": r[1], "power_dbm": r[-2]} for r in rows],
        )
        save_saturation_figure(
            args.out / "oracle_saturation.png",
            [r[0] for r in sat_rows], [r[1] for r in sat_rows],
        )
    print(f"wrote {sweep_path}, {phase_path}, {sat_path}")
    return 0


def cmd_readout(args) -> int:
    timer = ReportTimer()
    cfg = load_config(args.config)
    scenario = cfg.require("readout")
    seed = args.seed if args.seed is not None else int(
        cfg.raw.get("readout", {}).get("seed", 0)
    )
    result = simulate_readout(scenario, seed=seed, collect_shots=args.shots_table)
    nq = scenario.n_qutrits

    write_table(
        _table_path(args.out, "cross_fidelity", args.format),
        ["prepared_qutrit", "classified_qutrit", "fidelity"],
        [[i, j, float(result.fidelity[i, j])] for i in range(nq) for j in range(nq)],
        fmt=args.format,
    )
    shift_rows = []
    for t_idx, prepared in enumerate(result.prepared_tuples):
        for q in range(nq):
            s = result.mean_shifts[t_idx, q]
            shift_rows.append([*prepared, q, s.real, s.imag])
    write_table(
        _table_path(args.out, "mean_shifts", args.format),
        [f"prep_{i + 1}" for i in range(nq)] + ["qutrit", "shift_re", "shift_im"],
        shift_rows, fmt=args.format,
    )
    if result.shot_table is not None:
        by_qutrit: dict[int, list] = {q: [] for q in range(nq)}
        for prepared, q, outcomes, assigned in result.shot_table:
            for o, a in zip(outcomes, assigned):
                by_qutrit[q].append([*prepared, float(o.real), float(o.imag), int(a)])
        for q, shot_rows in by_qutrit.items():
            write_table(
                _table_path(args.out, f"shots_q{q + 1}", args.format),
                [f"prep_{i + 1}" for i in range(nq)] + ["q_re", "q_im", "assigned"],
                shot_rows, fmt=args.format,
            )
    write_report(
        args.out / "readout_report.json", "readout", cfg.raw, seed,
        {
            "fidelity": result.fidelity.tolist(),
            "conditional": result.conditional.tolist(),
            "shots": result.shots,
        },
        timer.elapsed_s(), __version__,
    )
    if args.plot:
        from .plotting import save_crossfid_figure

        save_crossfid_figure(args.out / "cross_fidelity.png", result.fidelity)
    print(f"cross-fidelity diag {[round(float(result.fidelity[i, i]), 4) for i in range(nq)]}; "
          f"wrote {args.out / 'readout_report.json'}")
    return 0


def cmd_analyze(args) -> int:
    cfg = load_config(args.config)
    tones = cfg.tone_set()
    opts = cfg.analyze or {"window": "blackman_harris_4term",
                           "reference_gain": None, "reference_noise_w": None}
    shots = []
    z0 = None
    for path in args.traces:
        trace, trace_z0 = read_trace(path)
        shots.append(trace)
        if z0 is None:
            z0 = trace_z0
        elif trace_z0 != z0:
            raise ConfigError("trace files disagree on z0")
    header = ["freq_hz", "gain_lin", "gain_db", "noise_w", "eff_change_db"]
    rows = []
    for signal in tones.signals:
        est = estimate_gain_noise(shots, signal.freq_hz, signal.power_dbm, z0=z0)
        eff = ""
        if opts["reference_gain"] and opts["reference_noise_w"]:
            from .oracle import GainNoiseEstimate

            ref = GainNoiseEstimate(gain=float(opts["reference_gain"]),
                                    noise=float(opts["reference_noise_w"]),
                                    shots=est.shots)
            eff = efficiency_change(est, ref)
        gain_db = 10.0 * np.log10(est.gain) if est.gain > 0 else float("-inf")
        rows.append([signal.freq_hz, est.gain, float(gain_db), est.noise, eff])
    path = _table_path(args.out, "gain_noise", args.format)
    write_table(path, header, rows, fmt=args.format)
    print(f"analyzed {len(shots)} traces; wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="imdplan",
        description="Intermodulation spur prediction, collision planning and "
                    "readout crosstalk simulation for parametric amplifiers.",
    )
    parser.add_argument("--version", action="version", version=f"imdplan {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True, type=Path, help="JSON config file")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument("--format", choices=("csv", "json-lines"), default="csv")
        p.add_argument("--plot", action="store_true",
                       help="also render figures next to the tables")

    p = sub.add_parser("enumerate", help="enumerate intermodulation products")
    common(p)
    p.add_argument("--max-order", type=int, default=None)
    p.add_argument("--band", default=None, metavar="MIN,MAX",
                   help="restrict to a band in GHz, e.g. 6.25,7.55")
    p.add_argument("--odd-only", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("power", help="product power sweep from the power-law model")
    common(p)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("bands", help="class-band intervals over a pump sweep")
    common(p)
    p.add_argument("--pump-start-ghz", type=float, default=8.0)
    p.add_argument("--pump-stop-ghz", type=float, default=12.0)
    p.add_argument("--pump-points", type=int, default=81)
    p.set_defaults(func=cmd_bands)

    p = sub.add_parser("check", help="detect spur-signal collisions for the config tones")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("mc", help="Monte Carlo collision probability table")
    common(p)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("plan", help="search for a collision-free frequency plan")
    common(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("oracle", help="time-domain simulator sweeps")
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("readout", help="multiplexed readout crosstalk simulation")
    common(p)
    p.add_argument("--shots-table", action="store_true",
                   help="also export raw shot tables")
    p.set_defaults(func=cmd_readout)

    p = sub.add_parser("analyze", help="gain/noise estimation from trace files")
    common(p)
    p.add_argument("traces", nargs="+", type=Path, help="trace CSV files")
    p.set_defaults(func=cmd_analyze)
    return parser


def _check_threads_env() -> None:
    value = os.environ.get("IMDPLAN_THREADS")
    if value is None:
        return
    try:
        threads = int(value)
    except ValueError:
        raise ConfigError(f"IMDPLAN_THREADS must be an integer, got {value!r}")
    if threads < 1:
        raise ConfigError("IMDPLAN_THREADS must be >= 1")
    # evaluation is deterministic and independent of the worker count


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _check_threads_env()
        args.out.mkdir(parents=True, exist_ok=True)
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
