use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeError {
    #[error("z = {z} is below the convergence radius rho' = {rho_prime}")]
    BelowConvergenceRadius { z: f64, rho_prime: f64 },
    #[error("resolvent recursion residual {residual:e} above tolerance")]
    NoConvergence { residual: f64 },
    #[error("l2 criterion never reaches 1 (value {low} at rho', {high} at z = 1)")]
    CriterionNeverReachesOne { low: f64, high: f64 },
    #[error("round trip a(p) = b(p')^2 fails with residual {residual:e}")]
    RoundTripResidualTooLarge { residual: f64 },
    #[error("exact distribution at t = {t} needs about {words} words, over the budget")]
    HorizonTooLarge { t: usize, words: f64 },
    #[error("walk is not transient (rho = {rho})")]
    NotTransient { rho: f64 },
    #[error("scale k = {k} must be at least 2")]
    InvalidScale { k: u64 },
    #[error("stopping set exceeds the node cap {cap}")]
    SetTooLarge { cap: usize },
    #[error("absorbing system is singular")]
    SingularSystem,
    #[error("series horizon {horizon} exceeds the configured cap {cap}")]
    DpBudgetExceeded { horizon: usize, cap: usize },
    #[error("invalid weights: {0}")]
    InvalidAlpha(String),
}
