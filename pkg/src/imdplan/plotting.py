"""Figure rendering for the report path.

Each plotting helper takes the same row data the delimited writers receive
and saves a PNG next to the tables.  All figures use the Agg backend so the
CLI never needs a display.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_mc_figure(path: str | Path, table) -> None:
    """Collision probability vs multiplexing degree, one curve per detuning."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for j, delta in enumerate(table.delta_values_hz):
        ax.plot(
            table.n_values,
            table.p_coll[:, j],
            marker="o",
            label=f"{delta / 1e6:g} MHz",
        )
    ax.set_xlabel("number of multiplexed tones N")
    ax.set_ylabel("collision probability")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(title="min. detuning", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_bands_figure(path: str | Path, rows, band) -> None:
    """Class-band intervals vs pump frequency over the signal band."""
    fig, ax = plt.subplots(figsize=(5.5, 4))
    by_label: dict[str, list] = {}
    for row in rows:
        by_label.setdefault(row["label"], []).append(row)
    colors = {1: "tab:green", 2: "tab:red", 3: "tab:blue"}
    for label, entries in by_label.items():
        pumps = [e["pump_ghz"] for e in entries]
        lo = [e["lo_ghz"] for e in entries]
        hi = [e["hi_ghz"] for e in entries]
        color = colors.get(entries[0]["o_s"], "0.6")
        ax.fill_between(pumps, lo, hi, alpha=0.25, color=color, linewidth=0)
    ax.axhspan(band.f_min_hz / 1e9, band.f_max_hz / 1e9, color="tab:green", alpha=0.4)
    ax.set_xlabel("pump frequency (GHz)")
    ax.set_ylabel("product frequency (GHz)")
    lo = band.f_min_hz / 1e9
    hi = band.f_max_hz / 1e9
    ax.set_ylim(lo - 2.0, hi + 3.0)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_power_sweep_figure(path: str | Path, rows) -> None:
    """Product output power vs swept input power, one line per product."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    by_label: dict[str, list] = {}
    for row in rows:
        by_label.setdefault(row["label"], []).append(row)
    for label, entries in sorted(by_label.items()):
        x = [e["p1_dbm"] for e in entries]
        y = [e["power_dbm"] for e in entries]
        ax.plot(x, y, marker=".", label=label, linewidth=1)
    ax.set_xlabel("input power p1 (dBm)")
    ax.set_ylabel("product output power (dBm)")
    ax.legend(fontsize=6, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_saturation_figure(path: str | Path, powers_dbm, gains_db) -> None:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(powers_dbm, gains_db, marker=".")
    ax.set_xlabel("input power (dBm)")
    ax.set_ylabel("gain (dB)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_crossfid_figure(path: str | Path, fidelity: np.ndarray) -> None:
    fig, ax = plt.subplots(figsize=(4, 3.5))
    im = ax.imshow(fidelity, vmin=0.0, vmax=1.0, cmap="viridis")
    nq = fidelity.shape[0]
    for i in range(nq):
        for j in range(nq):
            ax.text(
                j, i, f"{fidelity[i, j]:.3f}", ha="center", va="center", color="w",
                fontsize=8,
            )
    ax.set_xlabel("classified qutrit j")
    ax.set_ylabel("prepared qutrit i")
    ax.set_xticks(range(nq))
    ax.set_yticks(range(nq))
    fig.colorbar(im, ax=ax, label="cross-fidelity")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
