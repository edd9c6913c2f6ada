"""Phase-dependent double-lambda EIT toolkit.

Weak probe and signal fields coupled through two strong drives form a
closed interaction loop whose relative phase controls absorption, gain,
output phases, and pulse propagation.  The package provides the
steady-state closed forms, the critical-depth phase-jump analytics, the
phase-modulation design tools, and a time-domain Maxwell-Bloch integrator,
all in Gamma units.
"""

from .core import (
    DerivedQuantities,
    FieldPair,
    MediumParams,
    PerturbativeCheck,
    derive,
    validate_perturbative,
    wrap_phase,
    wrap_signed,
)
from .steady_state import (
    CoherenceState,
    PropagationCurve,
    ZeroFieldError,
    balanced_components,
    coherences_steady,
    decay_factor,
    propagate_balanced,
    propagate_general,
    trace_curve,
    transmission_and_phase,
    unwrapped_phase,
)
from .phase_jump import (
    JumpSolution,
    attenuation_rotation,
    critical_depth,
    detect_zero_crossing,
    jump_phase_probe,
    jump_phase_signal,
    solve_jump,
    zero_crossings,
)
from .apm import (
    ApmOperatingPoint,
    InfeasibleError,
    apm_contrast,
    operating_point,
    optimize_detuning,
    phi_r_for_half_pi_shift,
    phi_r_for_pi_shift,
    scan_local_maxima,
)
from .dynamics import (
    AmplificationResult,
    NumericalInstability,
    PulseShape,
    PulseSimResult,
    SimGrid,
    amplification_sweep,
    optimal_relative_phase,
    optimize_amplification,
    peak_transmission,
    simulate,
    steady_cw_output,
    step_coherences,
    step_fields,
)

__version__ = "0.1.0"

__all__ = [
    "AmplificationResult",
    "ApmOperatingPoint",
    "CoherenceState",
    "DerivedQuantities",
    "FieldPair",
    "InfeasibleError",
    "JumpSolution",
    "MediumParams",
    "NumericalInstability",
    "PerturbativeCheck",
    "PropagationCurve",
    "PulseShape",
    "PulseSimResult",
    "SimGrid",
    "ZeroFieldError",
    "amplification_sweep",
    "apm_contrast",
    "attenuation_rotation",
    "balanced_components",
    "coherences_steady",
    "critical_depth",
    "decay_factor",
    "derive",
    "detect_zero_crossing",
    "jump_phase_probe",
    "jump_phase_signal",
    "operating_point",
    "optimal_relative_phase",
    "optimize_amplification",
    "optimize_detuning",
    "peak_transmission",
    "phi_r_for_half_pi_shift",
    "phi_r_for_pi_shift",
    "propagate_balanced",
    "propagate_general",
    "scan_local_maxima",
    "simulate",
    "solve_jump",
    "steady_cw_output",
    "step_coherences",
    "step_fields",
    "trace_curve",
    "transmission_and_phase",
    "unwrapped_phase",
    "validate_perturbative",
    "wrap_phase",
    "wrap_signed",
    "zero_crossings",
]
