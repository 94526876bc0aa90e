"""Estimation of discrete complex measures from noisy moments.

The package wraps the C++ core: Hankel-pencil interpolation of moment
sequences, Monte Carlo and deterministic condensed spectral densities, the
pseudosample-averaged pole transform, cluster-based parameter recovery, and
the benchmark experiment harness.
"""

from ._core import (
    Cluster,
    ComplexMeasure,
    ErrorComparison,
    EstimationResult,
    ExperimentConfig,
    GridField,
    IllConditionedVandermonde,
    Lattice,
    McDensity,
    MomentSequence,
    NoiseSpec,
    ParamStats,
    PTransformResult,
    PencilSolution,
    PoolMember,
    PseudosamplePool,
    SingularPencil,
    SupportRadius,
    add_noise,
    analytic_density,
    analytic_log_potential,
    benchmark_config,
    benchmark_measure,
    complex_gaussian_vector,
    estimate_params,
    expected_F,
    gen_moments,
    h2_closed_form,
    interpolate,
    lattice_mass,
    local_maxima,
    make_pseudosamples,
    mass_fraction_near,
    mc_condensed_density,
    pure_noise_density,
    pure_noise_potential,
    ptransform,
    run_error_comparison,
    run_table1,
    snr,
    substream,
    support_radii,
    value_near,
)

__all__ = [
    "Cluster",
    "ComplexMeasure",
    "ErrorComparison",
    "EstimationResult",
    "ExperimentConfig",
    "GridField",
    "IllConditionedVandermonde",
    "Lattice",
    "McDensity",
    "MomentSequence",
    "NoiseSpec",
    "ParamStats",
    "PTransformResult",
    "PencilSolution",
    "PoolMember",
    "PseudosamplePool",
    "SingularPencil",
    "SupportRadius",
    "add_noise",
    "analytic_density",
    "analytic_log_potential",
    "benchmark_config",
    "benchmark_measure",
    "complex_gaussian_vector",
    "estimate_params",
    "expected_F",
    "gen_moments",
    "h2_closed_form",
    "interpolate",
    "lattice_mass",
    "local_maxima",
    "make_pseudosamples",
    "mass_fraction_near",
    "mc_condensed_density",
    "pure_noise_density",
    "pure_noise_potential",
    "ptransform",
    "run_error_comparison",
    "run_table1",
    "snr",
    "substream",
    "support_radii",
    "value_near",
]
