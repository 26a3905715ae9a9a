//! Error type shared by all simulator modules.

use thiserror::Error;

/// Errors produced by state construction, Hamiltonian assembly, and evolution.
#[derive(Debug, Clone, Error)]
pub enum QitError {
    #[error("level {label} out of range for subsystem {subsystem} (dim {dim})")]
    LabelOutOfRange {
        subsystem: usize,
        label: usize,
        dim: usize,
    },

    #[error("subsystem index {index} out of range ({count} subsystems)")]
    SubsystemOutOfRange { index: usize, count: usize },

    #[error("operator is {got}x{got} but subsystem {subsystem} has dimension {expected}")]
    DimensionMismatch {
        subsystem: usize,
        got: usize,
        expected: usize,
    },

    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("operator is not Hermitian (relative deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("integrator step {dt:.3e} s exceeds the allowed bound {bound:.3e} s")]
    StepTooLarge { dt: f64, bound: f64 },

    #[error("unsupported initial state for the analytic oracle: {0}")]
    UnsupportedInitialState(String),

    #[error(
        "spectator qubit {qubit} holds population {population:.3e} in levels 2/3 \
         before a cavity window; idealized mode requires it to be idle"
    )]
    SpectatorNotIdle { qubit: usize, population: f64 },

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("evolution violated an invariant: {0}")]
    InvariantViolated(String),
}

pub type Result<T> = std::result::Result<T, QitError>;
