use thiserror::Error;

/// Errors raised by the numerical layers (integration, level sets, Melnikov).
///
/// Newton failures carry their iteration log and live in
/// [`crate::solvers::SolveError`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("integration exceeded {max_steps} steps (reached t = {t})")]
    StepLimitExceeded { max_steps: usize, t: f64 },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("event not found: {found} of {wanted} crossings before t = {t}")]
    EventNotFound { found: usize, wanted: usize, t: f64 },

    #[error("{what} = {value} is outside the admissible range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("requested orbit period {period} is not attainable (must exceed 2*pi)")]
    Unattainable { period: f64 },

    #[error("root iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("base point has energy {energy}, expected {expected}")]
    SpecMismatch { energy: f64, expected: f64 },

    #[error("Melnikov function has no simple zeros (identically zero: {degenerate})")]
    NoSimpleZeros { degenerate: bool },

    #[error("inconsistent monodromy: det = {det} (expected 1)")]
    InconsistentMonodromy { det: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
