"""Event-operator model of gravitationally induced photon decoherence.

Two-arm radial interferometry around a Schwarzschild body: each detector
assigns its photon an elapsed shell time, gravity makes the two assignments
disagree by ``delta_t``, and detection operators carrying that label lose
mutual coherence by ``exp(-delta_t**2 / (2 d_t**2))`` for a source of
coherence length ``d_t``.  The package computes the mismatch exactly and to
first order, propagates it to coincidence-rate predictions under two causal
prescriptions, and cross-checks the operator algebra with a discrete
brute-force oracle.
"""

from .causal import (
    CausalPrescription,
    CausalScanPoint,
    DetectionEvents,
    arm2_path_with_hold,
    causal_scan,
    cone_entry_time,
    delta_t_causal,
    effective_endpoint,
)
from .coincidence import (
    CoincidencePrediction,
    c_total,
    coincidence_offset_curve,
    ratio_vs_height_curve,
)
from .commutator import EventQuotient, quotient, quotient_closed_form
from .modes import (
    ModeKind,
    SpectralMode,
    SqueezingParams,
    chi_effective,
    eval_amplitude,
    flat_mode,
    gaussian_mode,
    normalized_overlap,
)
from .oracle import (
    BruteForceResult,
    CheckResult,
    DiscreteEventOperator,
    DiscreteModeGrid,
    bruteforce_ratio,
    build_event_operator,
    coincidence_bruteforce,
    discrete_event_commutator,
    make_grid,
    verify_report,
)
from .spacetime import (
    ArmPath,
    BacktrackedOrigins,
    DeltaMismatch,
    ExperimentGeometry,
    HoldLeg,
    NullLeg,
    arm_path,
    backtrack_origins,
    delta_t_approx,
    delta_t_exact,
    ground_satellite_geometry,
    invert_tortoise,
    null_leg_mismatch,
    propagation_phase,
    shell_time_segment,
    static_mismatch,
    tau_arm,
    tortoise_phase,
)
from .units import (
    EARTH,
    BodySpec,
    DomainError,
    geometric_to_time,
    mass_kg_to_geometric,
    time_to_geometric,
)

__version__ = "0.1.0"
