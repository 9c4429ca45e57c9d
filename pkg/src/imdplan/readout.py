"""Frequency-multiplexed qutrit readout through the nonlinear amplifier.

Per-state resonator responses set the nominal means of the integrated
measurement outcomes; intermodulation products falling inside a victim's
acquisition band shift those means in a prepared-state-dependent way, and a
Gaussian-mixture classifier frozen at the unshifted calibration means turns
the shifts into misclassification and cross-qutrit information leakage.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .collisions import CollisionPolicy, policy_vectors
from .model import AmplifierModel, Tone
from .units import dbm_to_watts

TOPOLOGIES = ("side_coupled", "transmission")
STATE_LABELS = ("g", "e", "f", "h", "i")

#: Products detuned by more than this many inverse integration lengths fall
#: outside the victim's acquisition band and contribute no shift.
ACQUISITION_BANDWIDTH_FACTOR = 2.0


@dataclass(frozen=True)
class ResonatorModel:
    """Effective single-mode readout resonator with a per-state dispersive pull."""

    f_r_hz: float
    kappa_hz: float  # effective linewidth
    chi_hz: float  # dispersive shift per state step
    topology: str = "side_coupled"
    states: int = 3

    def __post_init__(self) -> None:
        if self.kappa_hz <= 0.0:
            raise ValueError("resonator linewidth must be > 0")
        if self.states < 2:
            raise ValueError("need at least two resonator states")
        if self.topology not in TOPOLOGIES:
            raise ValueError(f"unknown topology {self.topology!r}")

    def pulled_freq_hz(self, state: int) -> float:
        return self.f_r_hz + 2.0 * self.chi_hz * state


def steady_state_response(res: ResonatorModel, tone: Tone) -> np.ndarray:
    """Complex amplitude at the amplifier input for each resonator state.

    Normalized so ``|alpha|^2`` is the delivered power in watts; the tone's
    phase is carried along.
    """
    p_lin = tone.power_watts
    drive = math.sqrt(p_lin) * np.exp(1j * tone.phase_rad)
    alphas = np.empty(res.states, dtype=complex)
    half_kappa = np.pi * res.kappa_hz  # 2*pi * kappa/2
    for s in range(res.states):
        delta_w = 2.0 * np.pi * (tone.freq_hz - res.pulled_freq_hz(s))
        lorentzian = half_kappa / (1j * delta_w + half_kappa)
        if res.topology == "side_coupled":
            alphas[s] = drive * (1.0 - lorentzian)
        else:
            alphas[s] = drive * lorentzian
    return alphas


def power_efficiency(alpha_g: complex, alpha_e: complex) -> float:
    """Fraction of signal power carrying g/e state information."""
    den = 4.0 * max(abs(alpha_g) ** 2, abs(alpha_e) ** 2)
    if den == 0.0:
        raise ValueError("power efficiency undefined for two zero amplitudes")
    return abs(alpha_e - alpha_g) ** 2 / den


def displace_response(alpha_g: complex, alpha_e: complex) -> tuple[complex, complex]:
    """Subtract the two-state mean; the displaced pair has unit power efficiency."""
    mean = (alpha_g + alpha_e) / 2.0
    return alpha_g - mean, alpha_e - mean


def side_coupled_efficiency(kappa_hz: float, chi_hz: float) -> float:
    return kappa_hz**2 / (kappa_hz**2 + 4.0 * chi_hz**2)


def transmission_efficiency(kappa_hz: float, chi_hz: float) -> float:
    return 4.0 * chi_hz**2 / (kappa_hz**2 + 4.0 * chi_hz**2)


@dataclass(frozen=True)
class QutritChannel:
    resonator: ResonatorModel
    tone: Tone  # readout tone, power referenced to the amplifier input


@dataclass
class ReadoutScenario:
    qutrits: list[QutritChannel]
    pump: Tone
    amplifier: AmplifierModel
    integration_length_s: float = 200e-9
    weights: str = "boxcar"
    eta_ref: float = 0.24
    noise_ref_w: float = 1e-18  # per-quadrature variance scale at eta = 1
    shots: int = 10_000
    policy: CollisionPolicy = field(
        default_factory=lambda: CollisionPolicy(delta_min_hz=1.0, signal_orders=(2,))
    )
    include_crosstalk: bool = True

    def __post_init__(self) -> None:
        if not (0.0 < self.eta_ref <= 1.0):
            raise ValueError("eta_ref must be in (0, 1]")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.weights not in ("boxcar", "mode_matched"):
            raise ValueError(f"unknown integration weights {self.weights!r}")

    @property
    def n_qutrits(self) -> int:
        return len(self.qutrits)

    @property
    def states(self) -> int:
        return self.qutrits[0].resonator.states

    @property
    def noise_sigma(self) -> float:
        # phase-preserving convention: per-quadrature variance scales as 1/eta
        return math.sqrt(self.noise_ref_w / self.eta_ref)


@dataclass(frozen=True)
class CrossFidelityMatrix:
    fidelity: np.ndarray  # (n_qutrits, n_qutrits)
    conditional: np.ndarray  # Pr(outcome of j | prepared state of i), (Q, Q, d, d)
    shots: int
    prepared_tuples: tuple[tuple[int, ...], ...] = ()
    mean_shifts: np.ndarray | None = None  # (tuples, n_qutrits), complex
    shot_table: list | None = None  # (prepared, qutrit, outcomes, assigned)


def window_overlap(detuning_hz: float, integration_length_s: float) -> complex:
    """Spectral response of the integration window at a given detuning.

    A boxcar of length T integrates a detuned phasor to
    ``exp(i pi f T) * sinc(f T)``; overlap is 1 at zero detuning.
    """
    x = detuning_hz * integration_length_s
    return complex(np.sinc(x) * np.exp(1j * np.pi * x))


def _state_amplitudes(scenario: ReadoutScenario, states: tuple[int, ...]) -> np.ndarray:
    amps = np.empty(scenario.n_qutrits, dtype=complex)
    for q, (channel, s) in enumerate(zip(scenario.qutrits, states)):
        amps[q] = steady_state_response(channel.resonator, channel.tone)[s]
    return amps


def crosstalk_shift(
    scenario: ReadoutScenario, victim: int, states: tuple[int, ...]
) -> complex:
    """Complex shift of the victim's integrated amplitude for a prepared tuple.

    Each in-band product contributes its power-law amplitude (state-dependent
    tone powers), its phase-law phase (state-dependent tone phases), weighted
    by the integration window's response at the product's detuning.
    """
    alphas = _state_amplitudes(scenario, states)
    model = scenario.amplifier
    victim_freq = scenario.qutrits[victim].tone.freq_hz
    tone_freqs = [ch.tone.freq_hz for ch in scenario.qutrits]
    powers = np.abs(alphas) ** 2
    phases = np.angle(alphas)

    shift = 0j
    for n_p, n in policy_vectors(scenario.policy, scenario.n_qutrits):
        freq = n_p * scenario.pump.freq_hz + sum(
            c * f for c, f in zip(n, tone_freqs)
        )
        if freq < 0.0:
            n_p, n, freq = -n_p, tuple(-c for c in n), -freq
        detuning = freq - victim_freq
        if abs(detuning) * scenario.integration_length_s > ACQUISITION_BANDWIDTH_FACTOR:
            continue
        overlap = window_overlap(detuning, scenario.integration_length_s)
        order = sum(abs(c) for c in n)
        p_lin = model.gain_lin
        for c, p in zip(n, powers):
            p_lin *= p ** abs(c)
        if order >= 2:
            prod = IMProductProxy(n_p, n)
            p_ip = dbm_to_watts(model.intercept_dbm(prod))
            p_lin *= p_ip ** (1 - order)
        phase = model.theta(IMProductProxy(n_p, n)) + float(np.dot(n, phases))
        shift += math.sqrt(p_lin) * np.exp(1j * phase) * overlap
    return complex(shift)


class IMProductProxy:
    """Minimal product stand-in carrying only the coefficient vector."""

    def __init__(self, n_p: int, n: tuple[int, ...]):
        self.n_p = n_p
        self.n = n

    @property
    def signal_order(self) -> int:
        return sum(abs(c) for c in self.n)

    def coefficients(self) -> tuple[int, ...]:
        return (self.n_p,) + self.n


def cross_fidelity(pr: np.ndarray, d: int) -> float:
    """Cross-fidelity of a conditional distribution Pr(outcome | prepared).

    ``(sum_outcomes max_prepared Pr - 1) / (d - 1)``: 1 for an identity
    confusion matrix, 0 for a prepared-state-independent one.
    """
    pr = np.asarray(pr, dtype=float)
    if pr.shape != (d, d) or d < 2:
        raise ValueError("conditional distribution must be d x d with d >= 2")
    if np.any(pr < -1e-12) or np.any(np.abs(pr.sum(axis=1) - 1.0) > 1e-9):
        raise ValueError("rows of the conditional distribution must sum to 1")
    return float((pr.max(axis=0).sum() - 1.0) / (d - 1))


def simulate_readout(
    scenario: ReadoutScenario, seed: int = 0, collect_shots: bool = False
) -> CrossFidelityMatrix:
    """Monte Carlo shot simulation of multiplexed readout with crosstalk.

    Classification means stay frozen at the unshifted calibration positions,
    so crosstalk shifts produce misclassification instead of being absorbed
    into the calibration.
    """
    nq = scenario.n_qutrits
    d = scenario.states
    sqrt_gain = math.sqrt(scenario.amplifier.gain_lin)
    sigma = scenario.noise_sigma

    # calibration means: amplified per-state responses without any aggressor
    cal_means = np.empty((nq, d), dtype=complex)
    for q, channel in enumerate(scenario.qutrits):
        cal_means[q] = sqrt_gain * steady_state_response(channel.resonator, channel.tone)

    tuples = list(itertools.product(range(d), repeat=nq))
    counts = np.zeros((len(tuples), nq, d))
    mean_shifts = np.zeros((len(tuples), nq), dtype=complex)
    shot_table: list | None = [] if collect_shots else None
    for t_idx, prepared in enumerate(tuples):
        for q in range(nq):
            if scenario.include_crosstalk:
                mean_shifts[t_idx, q] = crosstalk_shift(scenario, q, prepared)
            center = cal_means[q, prepared[q]] + mean_shifts[t_idx, q]
            rng = np.random.default_rng([seed, t_idx, q])
            noise = rng.normal(0.0, sigma, size=(scenario.shots, 2))
            outcomes = center + noise[:, 0] + 1j * noise[:, 1]
            dist = np.abs(outcomes[:, None] - cal_means[q][None, :])
            assigned = np.argmin(dist, axis=1)
            counts[t_idx, q] = np.bincount(assigned, minlength=d)
            if shot_table is not None:
                shot_table.append((prepared, q, outcomes, assigned))

    # Pr(outcome of qutrit j | prepared state of qutrit i), averaged uniformly
    # over the prepared states of all other qutrits.
    conditional = np.zeros((nq, nq, d, d))
    for i in range(nq):
        for j in range(nq):
            for t_idx, prepared in enumerate(tuples):
                conditional[i, j, prepared[i]] += counts[t_idx, j]
            conditional[i, j] /= conditional[i, j].sum(axis=1, keepdims=True)

    fid = np.empty((nq, nq))
    for i in range(nq):
        for j in range(nq):
            fid[i, j] = cross_fidelity(conditional[i, j], d)
    return CrossFidelityMatrix(
        fidelity=fid,
        conditional=conditional,
        shots=scenario.shots,
        prepared_tuples=tuple(tuples),
        mean_shifts=mean_shifts,
        shot_table=shot_table,
    )
