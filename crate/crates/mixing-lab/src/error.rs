use schreier_graphs::GraphError;
use thiserror::Error;
use tree_calculus::TreeError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MixError {
    #[error("distance still {distance} at horizon {t_max}{}", if *.periodic { " (chain is periodic)" } else { "" })]
    NotMixedByHorizon {
        t_max: usize,
        distance: f64,
        periodic: bool,
    },
    #[error("epsilon must lie in (0,1), got {0}")]
    InvalidEpsilon(f64),
    #[error("non-backtracking operators need the simple random walk (uniform p)")]
    NotUniformWeights,
    #[error("the exit set covers the whole state space, so the exit time is infinite")]
    StopSpecUnbounded,
    #[error("|A({x},{y})| = {a} exceeds c B({x},{y}) = {cb}")]
    DominationViolated { x: usize, y: usize, a: f64, cb: f64 },
    #[error("matrix is not doubly stochastic: {0}")]
    NotBistochastic(String),
    #[error("dense path limited to {limit} states, got {size}")]
    TooLargeForDense { size: usize, limit: usize },
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("state {x} out of range for {n} states")]
    StateOutOfRange { x: usize, n: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}
