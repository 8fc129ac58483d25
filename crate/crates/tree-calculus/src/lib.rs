//! Exact calculus of the anisotropic random walk on the Cayley tree of a free
//! product: resolvent profiles, the two spectral radii, the Green function,
//! the `p -> p'` transform, entropy rates, Green-metric stopping sets with
//! their exit kernels, and the integrability criterion for product weights.

mod entropy;
mod error;
mod integrability;
mod packed;
mod resolvent;
mod series;
mod stopping;
mod transform;

pub use entropy::{
    default_dp_horizon, entropy_dp, entropy_green, exact_green_statistic, haagerup_bounds, spectral_summary, DpEntropy,
    DpWalk, GreenEstimate, HaagerupBounds, SpectralSummary, DEFAULT_DP_BUDGET,
};
pub use error::TreeError;
pub use integrability::{integrability, partial_sums, PartialSums, TransferReport};
pub use packed::PackedWord;
pub use resolvent::{
    criterion_linear, criterion_squared, rho, rho_prime, rho_prime_minimizer, solve_gamma,
    solve_gamma_iterative, ResolventProfile, RhoReport,
};
pub use series::{domination_check, resolvent_series, DominationReport, ResolventSeries};
pub use stopping::{backbone_kernel, build_stopping_set, BackboneKernel, BackboneMethod, StoppingSet};
pub use transform::{green_value, harmonic_weights, transform_p_to_pprime, PPrime};

pub type Result<T> = std::result::Result<T, TreeError>;
