//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors reported by evaluation, propagation and verification routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Input lies outside the mathematically supported domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter violates a documented precondition.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A field or intermediate state is invalid (non-finite amplitudes).
    #[error("state error: {0}")]
    State(String),

    /// A run configuration is inconsistent (e.g. snapshot off the step lattice).
    #[error("configuration error: {0}")]
    Config(String),

    /// The numerical integration produced non-finite values.
    #[error("numerical divergence at step {step}: {reason}")]
    Divergence { step: usize, reason: String },

    /// Peak tracking ran into the edge of its search window.
    #[error("peak tracking lost: {0}")]
    TrackingLost(String),

    /// No samples qualified for a windowed comparison.
    #[error("degenerate window: {0}")]
    DegenerateWindow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
