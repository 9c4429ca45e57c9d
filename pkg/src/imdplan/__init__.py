"""Intermodulation spur prediction, collision planning and readout crosstalk
simulation for traveling-wave parametric amplifiers."""

__version__ = "0.1.0"

from .bands import ProductClass, SignalBand, class_band, pump_condition_satisfied
from .collisions import (
    Collision,
    CollisionPolicy,
    FrequencyPlan,
    MCConfig,
    MCTable,
    detect_collisions,
    even_split,
    fwhm_to_delta,
    mc_collision_probability,
    plan_frequencies,
    surface_code_failure,
)
from .model import (
    AmplifierModel,
    IMProduct,
    Tone,
    ToneSet,
    compression_point,
    enumerate_products,
    ip3_point,
    product_phase,
    product_power,
    saturation_gain,
)
from .oracle import (
    GainNoiseEstimate,
    TimeTrace,
    ToneEstimate,
    TraceConfig,
    apply_nonlinearity,
    efficiency_change,
    estimate_gain_noise,
    extract_tones,
    synthesize_trace,
)
from .readout import (
    CrossFidelityMatrix,
    QutritChannel,
    ReadoutScenario,
    ResonatorModel,
    cross_fidelity,
    crosstalk_shift,
    displace_response,
    power_efficiency,
    simulate_readout,
    steady_state_response,
)

__all__ = [name for name in dir() if not name.startswith("_")]
