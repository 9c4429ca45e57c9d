"""Structured run configuration: JSON schema with unit-suffixed keys.

All keys carry explicit units (``_ghz``, ``_mhz``, ``_dbm``, ``_ns`` ...);
unknown keys are rejected with the offending path so that typos never pass
silently.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .bands import ProductClass, SignalBand
from .collisions import CollisionPolicy, MCConfig
from .model import AmplifierModel, Tone, ToneSet
from .readout import QutritChannel, ReadoutScenario, ResonatorModel

GHZ = 1e9
MHZ = 1e6
NS = 1e-9


class ConfigError(ValueError):
    """Raised for schema violations, with the offending key path."""


def _check_keys(section: dict, path: str, required: tuple, optional: tuple) -> None:
    if not isinstance(section, dict):
        raise ConfigError(f"{path}: expected an object")
    for key in required:
        if key not in section:
            raise ConfigError(f"{path}.{key}: missing required key")
    allowed = set(required) | set(optional)
    for key in section:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}: unknown key")


def _number(section: dict, path: str, key: str, default=None) -> float:
    if key not in section:
        if default is None:
            raise ConfigError(f"{path}.{key}: missing required key")
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {value!r}")
    return float(value)


@dataclass
class RunConfig:
    """Parsed configuration; sections absent from the file stay None."""

    raw: dict
    band: SignalBand | None = None
    pump: Tone | None = None
    signals: tuple[Tone, ...] | None = None
    amplifier: AmplifierModel | None = None
    policy: CollisionPolicy | None = None
    mc: MCConfig | None = None
    plan: dict | None = None
    enumerate_opts: dict | None = None
    oracle: dict | None = None
    readout: ReadoutScenario | None = None
    lines: list[int] | None = None
    analyze: dict | None = None

    def tone_set(self) -> ToneSet:
        if self.pump is None or not self.signals:
            raise ConfigError("config requires 'pump' and a nonempty 'signals' list")
        return ToneSet(pump=self.pump, signals=self.signals)

    def require(self, name: str):
        value = getattr(self, name if name != "enumerate" else "enumerate_opts")
        if value is None:
            raise ConfigError(f"config section '{name}' is required for this command")
        return value


_TOP_LEVEL_KEYS = (
    "band",
    "pump",
    "signals",
    "amplifier",
    "policy",
    "mc",
    "plan",
    "enumerate",
    "oracle",
    "readout",
    "lines",
    "analyze",
)


def load_config(path: str | Path) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}")
    return parse_config(raw)


def parse_config(raw: dict) -> RunConfig:
    _check_keys(raw, "config", required=(), optional=_TOP_LEVEL_KEYS)
    cfg = RunConfig(raw=raw)

    if "band" in raw:
        cfg.band = _parse_band(raw["band"], "band")
    if "pump" in raw:
        cfg.pump = _parse_tone(raw["pump"], "pump")
    if "signals" in raw:
        if not isinstance(raw["signals"], list) or not raw["signals"]:
            raise ConfigError("signals: expected a nonempty list of tones")
        cfg.signals = tuple(
            _parse_tone(t, f"signals[{i}]") for i, t in enumerate(raw["signals"])
        )
    if "amplifier" in raw:
        cfg.amplifier = _parse_amplifier(raw["amplifier"], "amplifier")
    if "policy" in raw:
        cfg.policy = _parse_policy(raw["policy"], "policy")
    if "mc" in raw:
        if cfg.band is None or cfg.pump is None:
            raise ConfigError("mc: requires 'band' and 'pump' sections")
        cfg.mc = _parse_mc(raw["mc"], "mc", cfg.band, cfg.pump.freq_hz)
    if "plan" in raw:
        cfg.plan = _parse_plan(raw["plan"], "plan")
    if "enumerate" in raw:
        cfg.enumerate_opts = _parse_enumerate(raw["enumerate"], "enumerate")
    if "oracle" in raw:
        cfg.oracle = _parse_oracle(raw["oracle"], "oracle")
    if "readout" in raw:
        if cfg.pump is None or cfg.amplifier is None:
            raise ConfigError("readout: requires 'pump' and 'amplifier' sections")
        cfg.readout = _parse_readout(raw["readout"], "readout", cfg)
    if "lines" in raw:
        lines = raw["lines"]
        if not isinstance(lines, list) or not all(
            isinstance(x, int) and x >= 1 for x in lines
        ):
            raise ConfigError("lines: expected a list of positive integers")
        cfg.lines = list(lines)
    if "analyze" in raw:
        cfg.analyze = _parse_analyze(raw["analyze"], "analyze")
    return cfg


def _parse_band(section: dict, path: str) -> SignalBand:
    _check_keys(section, path, required=("f_min_ghz", "f_max_ghz"), optional=())
    band = SignalBand(
        f_min_hz=_number(section, path, "f_min_ghz") * GHZ,
        f_max_hz=_number(section, path, "f_max_ghz") * GHZ,
    )
    return band


def _parse_tone(section: dict, path: str) -> Tone:
    _check_keys(
        section, path, required=("freq_ghz",), optional=("power_dbm", "phase_rad")
    )
    return Tone(
        freq_hz=_number(section, path, "freq_ghz") * GHZ,
        power_dbm=_number(section, path, "power_dbm", default=-102.0),
        phase_rad=_number(section, path, "phase_rad", default=0.0),
    )


def _parse_amplifier(section: dict, path: str) -> AmplifierModel:
    _check_keys(
        section,
        path,
        required=("gain_db",),
        optional=("p_ip2_dbm", "p_ip3_dbm", "k_per_v2", "z0_ohm"),
    )
    p_ip = {}
    if "p_ip2_dbm" in section:
        p_ip[2] = _number(section, path, "p_ip2_dbm")
    if "p_ip3_dbm" in section:
        p_ip[3] = _number(section, path, "p_ip3_dbm")
    return AmplifierModel(
        gain_db=_number(section, path, "gain_db"),
        p_ip_dbm=p_ip,
        k=_number(section, path, "k_per_v2", default=0.0),
        z0=_number(section, path, "z0_ohm", default=50.0),
    )


def _parse_policy(section: dict, path: str) -> CollisionPolicy:
    _check_keys(
        section,
        path,
        required=("delta_min_mhz",),
        optional=("signal_orders", "max_pump_order", "exclude_degenerate", "classes"),
    )
    classes = None
    if "classes" in section:
        classes = []
        for i, cls in enumerate(section["classes"]):
            cls_path = f"{path}.classes[{i}]"
            _check_keys(cls, cls_path, required=("n_p", "signs"), optional=())
            classes.append(
                ProductClass(n_p=int(cls["n_p"]), signs=tuple(cls["signs"]))
            )
        classes = tuple(classes)
    orders = section.get("signal_orders", [2])
    if not isinstance(orders, list) or not all(isinstance(o, int) for o in orders):
        raise ConfigError(f"{path}.signal_orders: expected a list of integers")
    return CollisionPolicy(
        delta_min_hz=_number(section, path, "delta_min_mhz") * MHZ,
        signal_orders=tuple(orders),
        max_pump_order=int(_number(section, path, "max_pump_order", default=2)),
        classes=classes,
        exclude_degenerate=bool(section.get("exclude_degenerate", True)),
    )


def _parse_mc(section: dict, path: str, band: SignalBand, pump_hz: float) -> MCConfig:
    _check_keys(
        section,
        path,
        required=(),
        optional=("samples", "seed", "n_values", "delta_min_mhz", "min_spacing_mhz"),
    )
    deltas = section.get("delta_min_mhz", [0.2, 0.5, 1.0, 2.0, 5.0, 10.0])
    n_values = section.get("n_values", list(range(2, 11)))
    return MCConfig(
        pump_hz=pump_hz,
        band=band,
        samples=int(_number(section, path, "samples", default=2000)),
        min_spacing_hz=_number(section, path, "min_spacing_mhz", default=20.0) * MHZ,
        n_values=tuple(int(n) for n in n_values),
        delta_values_hz=tuple(float(d) * MHZ for d in deltas),
        seed=int(_number(section, path, "seed", default=0)),
    )


def _parse_plan(section: dict, path: str) -> dict:
    _check_keys(
        section,
        path,
        required=("n",),
        optional=("min_spacing_mhz", "max_iters", "seed"),
    )
    return {
        "n": int(_number(section, path, "n")),
        "min_spacing_hz": _number(section, path, "min_spacing_mhz", default=20.0) * MHZ,
        "max_iters": int(_number(section, path, "max_iters", default=2000)),
        "seed": int(_number(section, path, "seed", default=0)),
    }


def _parse_enumerate(section: dict, path: str) -> dict:
    _check_keys(
        section, path, required=(), optional=("max_total_order", "odd_only")
    )
    return {
        "max_total_order": int(_number(section, path, "max_total_order", default=5)),
        "odd_only": bool(section.get("odd_only", False)),
    }


def _parse_oracle(section: dict, path: str) -> dict:
    _check_keys(
        section,
        path,
        required=(),
        optional=(
            "sample_rate_hz",
            "duration_s",
            "window",
            "noise_std_v",
            "quintic_per_v4",
            "freq_scale",
            "seed",
            "sweep_start_dbm",
            "sweep_stop_dbm",
            "sweep_points",
            "p2_offset_db",
            "phase_grid_points",
        ),
    )
    return {
        "sample_rate_hz": _number(section, path, "sample_rate_hz", default=1.8e9),
        "duration_s": _number(section, path, "duration_s", default=2.275e-6),
        "window": section.get("window", "blackman_harris_4term"),
        "noise_std_v": _number(section, path, "noise_std_v", default=0.0),
        "quintic_per_v4": _number(section, path, "quintic_per_v4", default=0.0),
        "freq_scale": _number(section, path, "freq_scale", default=1.0),
        "seed": int(_number(section, path, "seed", default=0)),
        "sweep_start_dbm": _number(section, path, "sweep_start_dbm", default=-130.0),
        "sweep_stop_dbm": _number(section, path, "sweep_stop_dbm", default=-105.0),
        "sweep_points": int(_number(section, path, "sweep_points", default=11)),
        "p2_offset_db": _number(section, path, "p2_offset_db", default=-3.0),
        "phase_grid_points": int(_number(section, path, "phase_grid_points", default=8)),
    }


def _parse_readout(section: dict, path: str, cfg: RunConfig) -> ReadoutScenario:
    _check_keys(
        section,
        path,
        required=("qutrits",),
        optional=(
            "integration_length_ns",
            "weights",
            "eta_ref",
            "noise_ref_dbm",
            "shots",
            "include_crosstalk",
            "signal_orders",
            "max_pump_order",
            "seed",
        ),
    )
    channels = []
    for i, q in enumerate(section["qutrits"]):
        q_path = f"{path}.qutrits[{i}]"
        _check_keys(
            q,
            q_path,
            required=("f_r_ghz", "kappa_mhz", "chi_mhz", "tone_power_dbm"),
            optional=("topology", "states", "tone_freq_ghz", "tone_phase_rad"),
        )
        res = ResonatorModel(
            f_r_hz=_number(q, q_path, "f_r_ghz") * GHZ,
            kappa_hz=_number(q, q_path, "kappa_mhz") * MHZ,
            chi_hz=_number(q, q_path, "chi_mhz") * MHZ,
            topology=q.get("topology", "side_coupled"),
            states=int(_number(q, q_path, "states", default=3)),
        )
        tone_freq = _number(
            q, q_path, "tone_freq_ghz", default=(res.f_r_hz + res.chi_hz) / GHZ
        ) * GHZ
        channels.append(
            QutritChannel(
                resonator=res,
                tone=Tone(
                    freq_hz=tone_freq,
                    power_dbm=_number(q, q_path, "tone_power_dbm"),
                    phase_rad=_number(q, q_path, "tone_phase_rad", default=0.0),
                ),
            )
        )
    orders = tuple(section.get("signal_orders", [2]))
    policy = CollisionPolicy(
        delta_min_hz=1.0,
        signal_orders=orders,
        max_pump_order=int(_number(section, path, "max_pump_order", default=2)),
    )
    noise_ref_dbm = _number(section, path, "noise_ref_dbm", default=-160.0)
    return ReadoutScenario(
        qutrits=channels,
        pump=cfg.pump,
        amplifier=cfg.amplifier,
        integration_length_s=_number(section, path, "integration_length_ns", default=200.0) * NS,
        weights=section.get("weights", "boxcar"),
        eta_ref=_number(section, path, "eta_ref", default=0.24),
        noise_ref_w=1e-3 * 10.0 ** (noise_ref_dbm / 10.0),
        shots=int(_number(section, path, "shots", default=10_000)),
        policy=policy,
        include_crosstalk=bool(section.get("include_crosstalk", True)),
    )


def _parse_analyze(section: dict, path: str) -> dict:
    _check_keys(
        section, path, required=(), optional=("window", "reference_gain", "reference_noise_w")
    )
    return {
        "window": section.get("window", "blackman_harris_4term"),
        "reference_gain": section.get("reference_gain"),
        "reference_noise_w": section.get("reference_noise_w"),
    }
