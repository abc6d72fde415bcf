"""Matrix-free convolutional phase retrieval.

Recovers a complex signal from the magnitudes of its cyclic
convolution with a random kernel: spectral initialization followed by
weighted generalized gradient descent, plus an experiment harness and
a Monte Carlo suite that verifies the expectation identities the
method's analysis rests on.
"""

__version__ = "0.1.0"

from .errors import (
    DegenerateOperator,
    IllConditionedSystem,
    InvalidDimension,
    InvalidInput,
    InvalidParameter,
    IoError,
    NumericalDivergence,
)
from .harness import (
    ChannelResult,
    ExperimentConfig,
    ImageDemoResult,
    ModelComparison,
    SignalPattern,
    TransitionCell,
    TransitionReport,
    TrialRecord,
    compare_models,
    gen_kernel,
    gen_signal,
    image_demo,
    phase_transition,
    read_report,
    render_comparison_svg,
    render_svg,
    run_trial,
    write_report,
)
from .initialization import (
    InitResult,
    PowerResult,
    apply_Y,
    norm_estimate,
    power_method,
    spectral_init,
)
from .lemma_verify import (
    McCheckReport,
    check_phase_approx_inequality,
    check_phase_diff_inequality,
    dense_leading_eigenpair,
    mc_M_expectation,
    mc_Y_expectation,
    mc_eta_smoothing,
    mc_fourth_moment,
    mc_nu_tilt,
    mc_psi_smoothing,
    mc_xi_smoothing,
    mc_zeta_moments,
    run_all_checks,
)
from .operators import (
    ConvolutionalMeasurement,
    DenseMeasurement,
    build_circulant_dense,
    circulant_operator_norm,
    complex_gaussian,
    dist_mod_phase,
    optimal_phase,
    phase_unit,
)
from .serialization import (
    BINARY_MAGIC,
    load_vector_binary,
    load_vector_json,
    read_pgm,
    save_vector_binary,
    save_vector_json,
    vector_from_pairs,
    vector_to_pairs,
    write_pgm,
    write_trajectory_csv,
)
from .solver import (
    BacktrackingStep,
    FixedStep,
    SolveResult,
    SolverConfig,
    adm_solve,
    gd_solve,
    objective,
    wirtinger_gradient,
)
from .weighting import (
    WeightingScheme,
    delta_infty,
    eta,
    h_closed_form,
    nu,
    psi,
    weights_from_observations,
    xi,
    zeta,
)

__all__ = [
    "BINARY_MAGIC",
    "BacktrackingStep",
    "ChannelResult",
    "ConvolutionalMeasurement",
    "DegenerateOperator",
    "DenseMeasurement",
    "ExperimentConfig",
    "FixedStep",
    "IllConditionedSystem",
    "ImageDemoResult",
    "InitResult",
    "InvalidDimension",
    "InvalidInput",
    "InvalidParameter",
    "IoError",
    "McCheckReport",
    "ModelComparison",
    "NumericalDivergence",
    "PowerResult",
    "SignalPattern",
    "SolveResult",
    "SolverConfig",
    "TransitionCell",
    "TransitionReport",
    "TrialRecord",
    "WeightingScheme",
    "adm_solve",
    "apply_Y",
    "build_circulant_dense",
    "check_phase_approx_inequality",
    "check_phase_diff_inequality",
    "circulant_operator_norm",
    "compare_models",
    "complex_gaussian",
    "delta_infty",
    "dense_leading_eigenpair",
    "dist_mod_phase",
    "eta",
    "gd_solve",
    "gen_kernel",
    "gen_signal",
    "h_closed_form",
    "image_demo",
    "load_vector_binary",
    "load_vector_json",
    "mc_M_expectation",
    "mc_Y_expectation",
    "mc_eta_smoothing",
    "mc_fourth_moment",
    "mc_nu_tilt",
    "mc_psi_smoothing",
    "mc_xi_smoothing",
    "mc_zeta_moments",
    "norm_estimate",
    "nu",
    "objective",
    "optimal_phase",
    "phase_transition",
    "phase_unit",
    "power_method",
    "psi",
    "read_pgm",
    "read_report",
    "render_comparison_svg",
    "render_svg",
    "run_all_checks",
    "run_trial",
    "save_vector_binary",
    "save_vector_json",
    "spectral_init",
    "vector_from_pairs",
    "vector_to_pairs",
    "weights_from_observations",
    "wirtinger_gradient",
    "write_pgm",
    "write_report",
    "write_trajectory_csv",
    "xi",
    "zeta",
]
