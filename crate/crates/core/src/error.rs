use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed channel config: {0}")]
    Malformed(String),

    #[error("invalid channel config: {0}")]
    InvalidConfig(String),

    #[error("unsupported normalization: noise_var must be 1.0, got {0}")]
    UnsupportedNormalization(f64),

    #[error("index out of range: {0}")]
    IndexOutOfRange(usize),

    #[error("invalid link: {0}")]
    InvalidLink(String),

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("genie construction undefined: cross gain h[{tx}][{rx}] is zero")]
    ZeroCrossGain { tx: usize, rx: usize },

    #[error("empty transmitter set")]
    EmptySet,

    #[error("invalid half-space: {0}")]
    InvalidHalfSpace(String),

    #[error("polytope is unbounded (rate {0} has no upper bound)")]
    Unbounded(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("capacity characterization does not apply: {0}")]
    HypothesesNotSatisfied(String),

    #[error("invalid simulation parameters: {0}")]
    InvalidParams(String),

    #[error("joint decoding search too large at receiver {receiver}: n*(R_j + R_j2) = {bits:.3} > {limit}")]
    JointSearchBudget {
        receiver: usize,
        bits: f64,
        limit: f64,
    },
}

pub type Result<T> = core::result::Result<T, Error>;
