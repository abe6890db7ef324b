//! Error type shared by every module.

use thiserror::Error;

/// Constraint of the complex Lie annulus that a point failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum LieConstraint {
    /// `L_-(z) <= r0`.
    InnerNorm,
    /// `L_+(z) >= r1`.
    OuterNorm,
    /// `q(z)` lies on the closed negative real axis.
    BranchCut,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("point outside the domain: {0}")]
    Domain(String),
    #[error("complex point outside the extension domain ({constraint:?}): {detail}")]
    LieDomain {
        constraint: LieConstraint,
        detail: String,
    },
    #[error("series truncated before tolerance was met (achieved tail bound {achieved:e})")]
    Truncation { achieved: f64 },
    #[error("handle cannot supply derivative of order {requested} (max {available})")]
    Capability { requested: usize, available: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{0} is not supported on this branch")]
    WrongBranch(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Whether the failure stems from configuration rather than numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::Config(_) | Error::WrongBranch(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
