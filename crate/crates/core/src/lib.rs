pub mod cli;
pub mod error;
pub mod figures;
pub mod finite;
pub mod model;
pub mod observables;
pub mod output;
pub mod phase;
mod roots;
pub mod sampler;

pub use error::{Error, Result};
pub use model::{
    eval_l, find_maximizers, free_energy, validate_spec, BetaPoint, FreeEnergy, LocalMax, MaximizerSet,
    ModelSpec, ToleranceConfig,
};
pub use phase::{
    c1_curve, c2_curve, classify, corner_point, critical_curve, inflection_points, trace_surface,
    transition_beta2, u0_from_beta3, universality_gap, v_region, CriticalPoint, PhaseClassification,
    SurfacePoint, SurfaceTrace, TraceFailure, VRegion,
};
pub use observables::{
    critical_approach_direction, divergence_probe, first_derivatives, jump_sizes, observables,
    second_derivatives, DivergenceProbe, DivergenceSample, FirstDerivatives, Matrix3, ObservableReport,
};
pub use finite::{
    exact_expectation, exact_psi_n, hom_count, hom_delta, hom_density, GraphEnsemble, GraphState, SubgraphSpec,
};
pub use sampler::{gibbs_sweep, run_chain, Chain, ChainConfig, ChainTrace, Sample, RNG_ID};
