"""Range estimation from multi-wavelength wrapped phase measurements."""

from .errors import InputError, InternalCheckError
from .exactmath import (
    Rational,
    extended_gcd,
    format_rational,
    gcd,
    lcm_rationals,
    minimal_integer_scale,
    parse_rational,
    scale_to_coprime_check,
    scaled_integers,
)
from .estimator import (
    PhaseObservation,
    RangeEstimate,
    estimate,
    ls_objective,
    synthesize_observation,
    wrap,
    wrap_array,
)
from .lattice import (
    CvpSolution,
    DualBasis,
    RangingPlan,
    UnimodularLift,
    build_dual_basis,
    build_lift,
    build_plan,
    closest_point,
    elementary_matrix,
    evaluate_candidate,
    gcd_chain,
)
from .oracle import brute_cvp, grid_argmin
from .simulate import (
    SimConfig,
    SweepPoint,
    SweepResult,
    default_sigma2_grid,
    detect_threshold,
    mse_at,
    noise_matrix,
    point_generator,
    run_sweep,
    sample_wrapped_normal,
    write_csv,
)

__version__ = "0.1.0"

__all__ = [
    "InputError",
    "InternalCheckError",
    "Rational",
    "gcd",
    "extended_gcd",
    "lcm_rationals",
    "minimal_integer_scale",
    "scaled_integers",
    "scale_to_coprime_check",
    "parse_rational",
    "format_rational",
    "RangingPlan",
    "UnimodularLift",
    "DualBasis",
    "CvpSolution",
    "build_plan",
    "gcd_chain",
    "elementary_matrix",
    "build_lift",
    "build_dual_basis",
    "closest_point",
    "evaluate_candidate",
    "PhaseObservation",
    "RangeEstimate",
    "wrap",
    "wrap_array",
    "ls_objective",
    "estimate",
    "synthesize_observation",
    "grid_argmin",
    "brute_cvp",
    "SimConfig",
    "SweepPoint",
    "SweepResult",
    "default_sigma2_grid",
    "sample_wrapped_normal",
    "point_generator",
    "noise_matrix",
    "run_sweep",
    "detect_threshold",
    "write_csv",
    "mse_at",
    "__version__",
]
