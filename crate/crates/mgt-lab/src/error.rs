use thiserror::Error;

/// Errors produced by the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameter values violate an invariant (positivity, variant consistency, ...).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A state, observable kind or functional was used with the wrong model variant.
    #[error("variant mismatch: {0}")]
    VariantMismatch(String),

    /// A numerical routine failed to reach its accuracy contract.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Eigenvalue branch continuation lost track of a branch.
    #[error("branch matching failed at |xi| = {xi_abs}: {detail}")]
    BranchMatching { xi_abs: f64, detail: String },

    /// Configuration file or flag rejected.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
