//! Mixing measurements on finite Schreier graphs and lifts.
//!
//! Distances to equilibrium are computed by exact propagation of the law of
//! the walk, never by sampling. Alongside sit the spectral tools used to
//! explain them: singular radii, dense spectra, non-backtracking operators,
//! the stopping-time bound and the localized contraction bound.

mod cutoff;
mod dense;
mod error;
mod geronimus;
mod kappa;
mod profile;
mod propagate;
mod singular;
mod spectrum;
mod stoop;

pub use cutoff::{cutoff_experiment, CellResult, CutoffConfig, CutoffSummary, Family, StartCurve};
pub use dense::{random_chain, random_reversible_chain, DenseChain, DENSE_LIMIT};
pub use error::MixError;
pub use geronimus::{
    brute_force_nb_counts, chebyshev_u, geronimus, geronimus_eval, nb_spectral_radius_bound,
    nonbacktracking_dist, nonbacktracking_dist_exact,
};
pub use kappa::{
    backbone_pipeline, backbone_projection_check, kappa_bound_check, BackbonePipeline,
    KappaReport, ProjectionCheck,
};
pub use profile::{gaussian_tail_inverse, phi_profile, srw_entropy};
pub use propagate::{
    mixing_curve, mixing_time, period, propagate, tv_distance, DistributionVector, MixingCurve,
};
pub use singular::{singular_radius_t, SingularRadius};
pub use spectrum::{spectrum_report, supoz_rhs, Outlier, SpectrumReport};
pub use stoop::{stopping_bound_check, StopSpec, StoopReport};

pub type Result<T> = std::result::Result<T, MixError>;
