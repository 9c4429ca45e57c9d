"""Spur-signal collision detection, Monte Carlo collision probabilities and
collision-free frequency planning."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .bands import ProductClass, SignalBand
from .model import IMProduct, canonical_coefficients

#: One-sided collision bandwidth of a square pulse of length tau is 0.6/tau
#: (half the 1.2/tau FWHM of the |sinc|^2 main lobe).
FWHM_COLLISION_FACTOR = 0.6

_DEFAULT_BAND = SignalBand(6.4e9, 7.4e9)


@dataclass(frozen=True)
class CollisionPolicy:
    """Which products count, and how close a spur must be to collide.

    Either an explicit list of product ``classes`` or an order filter
    (products with signal order in ``signal_orders`` and ``|n_p|`` up to
    ``max_pump_order``) selects the coefficient vectors.  Combinations
    whose coefficient vector algebraically reduces to a bare signal or a
    pure pump harmonic are excluded by default.
    """

    delta_min_hz: float
    signal_orders: tuple[int, ...] = (2,)
    max_pump_order: int = 2
    classes: tuple[ProductClass, ...] | None = None
    exclude_degenerate: bool = True

    def __post_init__(self) -> None:
        if self.delta_min_hz <= 0.0:
            raise ValueError("delta_min must be > 0")


@dataclass(frozen=True)
class MCConfig:
    pump_hz: float
    band: SignalBand = _DEFAULT_BAND
    samples: int = 2000
    min_spacing_hz: float = 20e6
    n_values: tuple[int, ...] = (2, 3, 4, 5, 6, 7, 8, 9, 10)
    delta_values_hz: tuple[float, ...] = (0.2e6, 0.5e6, 1e6, 2e6, 5e6, 10e6)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not self.n_values or min(self.n_values) < 1:
            raise ValueError("n_values must be positive")
        if (max(self.n_values) - 1) * self.min_spacing_hz >= self.band.width_hz:
            raise ValueError("minimum spacing infeasible for the requested N")


@dataclass(frozen=True)
class Collision:
    product: IMProduct
    signal_index: int
    detuning_hz: float


@dataclass(frozen=True)
class MCTable:
    """Collision probability per (degree of multiplexing, minimum detuning)."""

    n_values: tuple[int, ...]
    delta_values_hz: tuple[float, ...]
    p_coll: np.ndarray  # shape (len(n_values), len(delta_values))
    stderr: np.ndarray
    samples: int
    seed: int

    def lookup(self, n: int, delta_hz: float) -> float:
        i = self.n_values.index(n)
        j = self.delta_values_hz.index(delta_hz)
        return float(self.p_coll[i, j])


@dataclass(frozen=True)
class FrequencyPlan:
    assigned_hz: tuple[float, ...]
    pump_hz: float
    residual_collisions: tuple[Collision, ...]

    @property
    def valid(self) -> bool:
        return not self.residual_collisions


def _is_degenerate(n_p: int, n: tuple[int, ...]) -> bool:
    """A vector reducing to a bare signal or containing no signal photons."""
    order = sum(abs(c) for c in n)
    if order == 0:
        return True
    if n_p == 0 and order == 1:
        return True
    return False


def _vectors_of_order(n_signals: int, order: int):
    """All integer vectors of length n_signals with sum(|n_i|) == order."""
    for support in range(1, min(order, n_signals) + 1):
        for positions in itertools.combinations(range(n_signals), support):
            for comp in _compositions(order, support):
                for signs in itertools.product((1, -1), repeat=support):
                    vec = [0] * n_signals
                    for pos, mag, sign in zip(positions, comp, signs):
                        vec[pos] = sign * mag
                    yield tuple(vec)


def _compositions(total: int, parts: int):
    """Ordered compositions of total into a fixed number of positive parts."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def policy_vectors(policy: CollisionPolicy, n_signals: int) -> list[tuple[int, tuple[int, ...]]]:
    """Canonical, deduplicated (n_p, n) coefficient vectors selected by a policy."""
    seen: set[tuple[int, ...]] = set()
    out: list[tuple[int, tuple[int, ...]]] = []

    def _add(n_p: int, n: tuple[int, ...]) -> None:
        if n_p == 0 and not any(n):
            return
        if policy.exclude_degenerate and _is_degenerate(n_p, n):
            return
        canon = canonical_coefficients((n_p,) + n)
        if canon in seen:
            return
        seen.add(canon)
        out.append((canon[0], canon[1:]))

    if policy.classes is not None:
        for cls in policy.classes:
            for assignment in itertools.product(range(n_signals), repeat=cls.signal_order):
                vec = [0] * n_signals
                for sign, idx in zip(cls.signs, assignment):
                    vec[idx] += sign
                _add(cls.n_p, tuple(vec))
    else:
        for order in policy.signal_orders:
            for vec in _vectors_of_order(n_signals, order):
                for n_p in range(-policy.max_pump_order, policy.max_pump_order + 1):
                    _add(n_p, vec)
    return out


def _prune_vectors(
    vectors: list[tuple[int, tuple[int, ...]]],
    band: SignalBand,
    pump_hz: float,
    delta_max_hz: float,
) -> list[tuple[int, tuple[int, ...]]]:
    """Drop vectors whose folded frequency interval cannot reach the band."""
    lo_target = band.f_min_hz - delta_max_hz
    hi_target = band.f_max_hz + delta_max_hz
    kept = []
    for n_p, n in vectors:
        lo = hi = n_p * pump_hz
        for c in n:
            if c > 0:
                lo += c * band.f_min_hz
                hi += c * band.f_max_hz
            else:
                lo += c * band.f_max_hz
                hi += c * band.f_min_hz
        if hi <= 0.0:
            lo, hi = -hi, -lo
        elif lo < 0.0:
            lo, hi = 0.0, max(-lo, hi)
        if hi >= lo_target and lo <= hi_target:
            kept.append((n_p, n))
    return kept


def detect_collisions(
    freqs_hz, pump_hz: float, policy: CollisionPolicy
) -> list[Collision]:
    """Every (product, signal) pair closer than the policy's minimum detuning."""
    freqs = [float(f) for f in freqs_hz]
    if len(set(freqs)) != len(freqs):
        raise ValueError("signal frequencies must be distinct")
    collisions = []
    for n_p, n in policy_vectors(policy, len(freqs)):
        f_prod = abs(n_p * pump_hz + sum(c * f for c, f in zip(n, freqs)))
        for idx, f_sig in enumerate(freqs):
            detuning = f_prod - f_sig
            if abs(detuning) < policy.delta_min_hz:
                prod = IMProduct(n_p=n_p, n=n, freq_hz=f_prod)
                collisions.append(
                    Collision(product=prod, signal_index=idx, detuning_hz=detuning)
                )
    collisions.sort(key=lambda c: (abs(c.detuning_hz), c.signal_index))
    return collisions


def _sample_configuration(
    rng: np.random.Generator, n: int, band: SignalBand, min_spacing_hz: float
) -> np.ndarray:
    """Uniform frequencies in the band, rejecting configurations that violate
    the minimum spacing; raises if acceptance is hopeless."""
    for _ in range(1_000_000):
        f = rng.uniform(band.f_min_hz, band.f_max_hz, size=n)
        if n == 1 or np.min(np.diff(np.sort(f))) >= min_spacing_hz:
            return f
    raise RuntimeError("spacing rejection acceptance rate below 1e-6")


def mc_collision_probability(cfg: MCConfig, policy: CollisionPolicy) -> MCTable:
    """Monte Carlo estimate of the collision probability table.

    One frequency configuration of max(n_values) tones is drawn per sample;
    each smaller N uses its prefix, so the per-sample collision indicator is
    exactly non-decreasing in both N and the detuning threshold.
    """
    n_values = tuple(cfg.n_values)
    deltas = tuple(cfg.delta_values_hz)
    n_max = max(n_values)
    delta_max = max(max(deltas), policy.delta_min_hz)

    freqs = np.empty((cfg.samples, n_max))
    for i in range(cfg.samples):
        rng = np.random.default_rng([cfg.seed, i])
        freqs[i] = _sample_configuration(rng, n_max, cfg.band, cfg.min_spacing_hz)

    # Minimum spur-signal detuning per (sample, N); thresholding it gives the
    # collision indicator for every delta at once.
    dmin = np.full((cfg.samples, len(n_values)), np.inf)
    for col, n in enumerate(n_values):
        vectors = _prune_vectors(
            policy_vectors(policy, n), cfg.band, cfg.pump_hz, delta_max
        )
        if not vectors:
            continue
        coeff = np.array([vec for _, vec in vectors], dtype=float)  # (K, n)
        pump_part = cfg.pump_hz * np.array([n_p for n_p, _ in vectors], dtype=float)
        f_n = freqs[:, :n]
        chunk = max(1, int(5_000_000 // max(1, len(vectors) * n)))
        for start in range(0, cfg.samples, chunk):
            f_c = f_n[start : start + chunk]
            prod = np.abs(f_c @ coeff.T + pump_part)  # (chunk, K)
            d = np.abs(prod[:, :, None] - f_c[:, None, :]).min(axis=(1, 2))
            dmin[start : start + chunk, col] = d

    p = np.empty((len(n_values), len(deltas)))
    for j, delta in enumerate(deltas):
        p[:, j] = (dmin < delta).mean(axis=0)
    stderr = np.sqrt(p * (1.0 - p) / cfg.samples)
    return MCTable(
        n_values=n_values,
        delta_values_hz=deltas,
        p_coll=p,
        stderr=stderr,
        samples=cfg.samples,
        seed=cfg.seed,
    )


def even_split(n_qubits: int, n_lines: int) -> list[int]:
    """Distribute qubits across readout lines as evenly as possible."""
    if n_lines < 1 or n_qubits < n_lines:
        raise ValueError("need at least one qubit per line")
    base, rem = divmod(n_qubits, n_lines)
    return [base + 1] * rem + [base] * (n_lines - rem)


def surface_code_failure(
    line_sizes, delta_min_hz: float, pump_hz: float, policy: CollisionPolicy, cfg: MCConfig
) -> float:
    """Probability that at least one readout line suffers a collision.

    Lines are independent, so the failure probability composes as
    ``1 - prod(1 - P_coll(N_line))``.
    """
    sizes = list(line_sizes)
    if not sizes:
        raise ValueError("line_sizes must be nonempty")
    mc_cfg = MCConfig(
        pump_hz=pump_hz,
        band=cfg.band,
        samples=cfg.samples,
        min_spacing_hz=cfg.min_spacing_hz,
        n_values=tuple(sorted(set(sizes))),
        delta_values_hz=(delta_min_hz,),
        seed=cfg.seed,
    )
    table = mc_collision_probability(mc_cfg, policy)
    p_ok = 1.0
    for n in sizes:
        p_ok *= 1.0 - table.lookup(n, delta_min_hz)
    return 1.0 - p_ok


def plan_frequencies(
    n: int,
    band: SignalBand,
    policy: CollisionPolicy,
    pump_hz: float,
    min_spacing_hz: float,
    max_iters: int = 2000,
    seed: int = 0,
) -> FrequencyPlan:
    """Search for a collision-free frequency assignment.

    Randomized restart with greedy repair: starting from a uniformly sampled
    configuration, the signal involved in the worst (smallest-detuning)
    collision is re-placed by a seeded perturbation that respects the band
    and spacing constraints.  Returns the first collision-free plan found,
    otherwise the best configuration seen, with its residual collisions.
    """
    if (n - 1) * min_spacing_hz >= band.width_hz:
        raise ValueError("minimum spacing infeasible for the requested N")
    rng = np.random.default_rng([seed, 0])
    freqs = _sample_configuration(rng, n, band, min_spacing_hz)
    best = freqs.copy()
    best_collisions = detect_collisions(best, pump_hz, policy)

    collisions = best_collisions
    for _ in range(max_iters):
        if not collisions:
            break
        victim = collisions[0].signal_index
        moved = False
        for _ in range(200):
            candidate = rng.uniform(band.f_min_hz, band.f_max_hz)
            others = np.delete(freqs, victim)
            if np.all(np.abs(others - candidate) >= min_spacing_hz):
                freqs[victim] = candidate
                moved = True
                break
        if not moved:
            freqs = _sample_configuration(rng, n, band, min_spacing_hz)
        collisions = detect_collisions(freqs, pump_hz, policy)
        if len(collisions) < len(best_collisions):
            best = freqs.copy()
            best_collisions = collisions
    if not collisions:
        best = freqs.copy()
        best_collisions = collisions
    return FrequencyPlan(
        assigned_hz=tuple(float(f) for f in best),
        pump_hz=pump_hz,
        residual_collisions=tuple(best_collisions),
    )


def fwhm_to_delta(pulse_length_s: float) -> float:
    """Collision bandwidth (Hz) corresponding to a square pulse length."""
    if pulse_length_s <= 0.0:
        raise ValueError("pulse length must be > 0")
    return FWHM_COLLISION_FACTOR / pulse_length_s
