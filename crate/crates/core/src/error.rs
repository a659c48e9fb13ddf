use thiserror::Error;

use crate::model::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid system: {}", summarize(.0))]
    InvalidSpec(Vec<Violation>),

    #[error("invalid parameter `{name}`: {reason}")]
    OutOfRange { name: &'static str, reason: String },

    /// Some squared normal-mode frequency is not positive.
    #[error("non-positive normal mode: omega^2 = {omega_sq:e}")]
    NonPositiveMode { omega_sq: f64 },

    #[error("expected {expected} oscillator quantum entries, got {got}")]
    QuantumMismatch { expected: usize, got: usize },

    #[error("no real solution of the tangency condition: {0}")]
    Domain(String),

    /// The auxiliary parameter has the wrong sign for the potential it replaces.
    #[error("auxiliary parameter {value} must be {required}")]
    Sign { value: f64, required: &'static str },

    #[error("no convergence after {iterations} iterations (best residual {best_residual:e})")]
    NoConvergence {
        iterations: usize,
        best_residual: f64,
    },

    #[error("no admissible starting point found")]
    InadmissibleEverywhere,

    #[error("improved quantum number is not available for {0}")]
    IetUnsupported(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("config: {0}")]
    Config(String),
}

fn summarize(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.code.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}
