//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by basis construction, model validation, solvers and sweeps.
#[derive(Debug, Error)]
pub enum Error {
    /// Physically or numerically invalid model parameters / configuration.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A sweep axis or rule referenced a parameter that does not exist.
    #[error("unknown parameter `{0}`")]
    UnknownParam(String),

    /// A derived-rule expression failed to parse or evaluate.
    #[error("bad rule expression `{expr}`: {msg}")]
    BadExpression { expr: String, msg: String },

    /// The steady-state linear system was numerically singular (null space
    /// dimension > 1 or non-finite solution).
    #[error("singular steady-state system: {0}")]
    SingularSteadyState(String),

    /// The cascade produced no photon-pair flux (e.g. zero drive); the pair
    /// density matrix is undefined.
    #[error("zero photon-pair flux: cannot normalize the pair density matrix")]
    ZeroPairFlux,

    /// An internal consistency check failed (conserved-quantity commutator,
    /// positivity beyond tolerance, mislabeled manifolds, ...). These indicate
    /// a bug or a parameter regime outside the model's validity.
    #[error("internal consistency check failed: {0}")]
    InternalInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
