"""Quantum discord and one-way quantum work deficit of the two-qubit XXZ
dimer at thermal equilibrium.

Layers:

* `model`        -- thermal X state and scalar thermodynamics from (J, Jz, B, T)
* `entropies`    -- closed-form measurement-angle entropy profiles
* `oracle`       -- independent brute-force matrix path (ground truth)
* `correlations` -- endpoint branches and the three-branch optimizer
* `phasemap`     -- endpoint curvatures, boundary tracing, phase diagrams
* `transitions`  -- path scans, transition classification, Landau fits
* `verify`       -- cross-route property suites
* `service`/`cli`-- FastAPI wrapper and its thin command-line client

All entropies and correlations are in nats internally; unit conversion
happens at the service/CLI boundary.
"""

from .correlations import (
    BranchTag,
    CorrelationKind,
    CorrelationResult,
    deficit_at_pi_half,
    deficit_at_zero,
    deficit_heat_relation,
    deficit_profile,
    discord_at_pi_half,
    discord_at_zero,
    discord_profile,
    optimize,
)
from .entropies import (
    conditional_entropy,
    endpoint_derivative_check,
    post_eigs,
    post_entropy,
    post_marginal_entropy,
    reduced_entropy,
)
from .errors import (
    DegenerateOutcome,
    IllConditionedFit,
    InsufficientPoints,
    InvalidState,
    NearTransition,
    NoBracket,
    NonPositiveTemperature,
    NoTransitionFound,
    NotHermitian,
    PairNotBorn,
    RangeUnsupported,
    XxzCorrError,
)
from .model import (
    ModelParams,
    Spectrum,
    XState,
    heat_capacity,
    log_partition_function,
    partition_function,
    spectrum,
    state_eigenvalues,
    thermal_xstate,
    thermo_entropy,
)
from .oracle import (
    assemble_state,
    brute_force_minimize,
    conditional_outcomes,
    eig4,
    post_measure,
)
from .phasemap import (
    BoundaryCurve,
    BoundaryKind,
    EndpointCurvatures,
    PhaseDiagram,
    asymptote,
    curvatures,
    pair_birth_temperature,
    rasterize,
    solve_boundary_field,
    solve_boundary_temperature,
    trace_boundary,
)
from .transitions import (
    PathScan,
    TaylorCoeffs,
    TransitionKind,
    TransitionReport,
    TransitionSide,
    classify,
    derivative_discontinuities,
    fit_exponent,
    scan_path,
    taylor_coeffs,
)

__version__ = "0.1.0"
