"""Cavity, dot ensemble, rate-equation and spectrum models."""

from .analysis import (
    PeakReport,
    SpectrumAnalysis,
    SweepResult,
    SweepRow,
    analyse_spectrum,
    dip_contrast,
    effective_purcell,
    flatness,
    forward_broadening,
    peak_fwhm,
    power_sweep,
)
from .cavity import (
    BroadEmitterRule,
    CavityMode,
    FieldProfile,
    PurcellInputs,
    effective_q_broad_emitter,
    field_intensity,
    lorentzian,
    mode_volume_for,
    purcell_factor,
)
from .dynamics import (
    BiexcitonEnhancement,
    SteadyState,
    TransitionRates,
    integrate_rate_eqs,
    steady_state,
    transition_rates,
)
from .ensemble import (
    DotEnsemble,
    EnsembleConfig,
    EnsembleMode,
    QuantumDot,
    build_ensemble,
    quadrature_ensemble,
    sample_ensemble,
    smoothness_check,
)
from .spectrum import (
    Channel,
    CollectionGeometry,
    SpectralGrid,
    Spectrum,
    combine,
    normalize_peak,
    synthesize,
)

__all__ = [
    "BiexcitonEnhancement",
    "BroadEmitterRule",
    "CavityMode",
    "Channel",
    "CollectionGeometry",
    "DotEnsemble",
    "EnsembleConfig",
    "EnsembleMode",
    "FieldProfile",
    "PeakReport",
    "PurcellInputs",
    "QuantumDot",
    "SpectralGrid",
    "Spectrum",
    "SpectrumAnalysis",
    "SteadyState",
    "SweepResult",
    "SweepRow",
    "TransitionRates",
    "analyse_spectrum",
    "build_ensemble",
    "combine",
    "dip_contrast",
    "effective_purcell",
    "effective_q_broad_emitter",
    "field_intensity",
    "flatness",
    "forward_broadening",
    "integrate_rate_eqs",
    "lorentzian",
    "mode_volume_for",
    "normalize_peak",
    "peak_fwhm",
    "power_sweep",
    "purcell_factor",
    "quadrature_ensemble",
    "sample_ensemble",
    "smoothness_check",
    "steady_state",
    "synthesize",
    "transition_rates",
]
