from .action_angle import (
    AAQuantities,
    BasisSample,
    FourierComparison,
    a1,
    aa_quantities,
    averaged_action,
    basis_g,
    beta_of_energy,
    d2_a1,
    d2_averaged_action,
    d_a1,
    d_averaged_action,
    d_frequency,
    fourier_bn,
    fourier_bn_printed,
    fourier_bn_report,
    frequency,
    phi,
    potential,
    q_of_theta,
)
from .base import (
    WALL,
    XI_WALL,
    AveragedEnergy,
    BracketError,
    BranchOutOfRangeError,
    ChatterError,
    EnergyOutOfRangeError,
    HVIException,
    InvalidBracketError,
    InvalidSimConfigError,
    KinkError,
    LPTEscapeError,
    MechanismNotApplicableError,
    NegativeEnergyError,
    NonConvergenceError,
    Regime,
    Side,
    SingularLocusError,
    WindowTooLongError,
    regime,
)
from .bifurcation import (
    BoundarySample,
    Branch,
    CriticalEnergy,
    FrequencyResponsePoint,
    JumpSample,
    Mechanism,
    TransitionBoundary,
    boundary_maximum,
    boundary_saddle,
    coexistence_point,
    energy_map,
    energy_map_grid,
    f_m,
    frequency_response,
    jump_asymptote,
    linear_exact_boundary,
    lpt_max_energy,
    post_crossing_curve,
    post_crossing_energy,
    transition_boundary,
)
from .manifold import (
    LocusSample,
    LPTContour,
    PhasePoint,
    ScaledForcing,
    StationaryKind,
    StationaryPoint,
    classify_stationary,
    conservation,
    dC_dnu,
    dC_dxi,
    locus_asymptote,
    locus_fold,
    locus_forcing,
    lpt_contour,
    manifold_grid,
    manifold_value,
    second_partials,
    sigma_of_stationary,
    stationary_locus,
    stationary_points,
)
from .simulation import (
    EnergySummary,
    Estimator,
    Segment,
    SimConfig,
    Trajectory,
    crosses,
    energy_summary,
    free_impact_interval,
    normalize,
    numeric_boundary,
    reference_segment,
    simulate,
)
