use thiserror::Error;

/// Errors raised by the model, solvers and harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value in component {component} at cell {cell}")]
    NonFinite { component: &'static str, cell: usize },

    #[error("negative value {value} in component {component} at cell {cell}")]
    Negative {
        component: &'static str,
        cell: usize,
        value: f64,
    },

    #[error("non-positive value {value} in component {component} at cell {cell}")]
    NonPositive {
        component: &'static str,
        cell: usize,
        value: f64,
    },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("time {t} is not an integer multiple of the cell width {dx}")]
    IncompatibleShift { t: f64, dx: f64 },

    #[error("switching probability {probability} exceeds 1 at cell {cell} (orientation {orientation})")]
    ProbabilityOverflow {
        cell: usize,
        orientation: i8,
        probability: f64,
    },

    #[error("step budget exceeded: {steps} steps requested, budget is {budget}")]
    StepBudget { steps: usize, budget: usize },

    #[error("integrator failed: {0}")]
    Integrator(String),

    #[error("precondition violated at cell {cell}: {reason}")]
    Precondition { cell: usize, reason: String },

    #[error("sample mismatch: {0}")]
    SampleMismatch(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of a numerical precondition, as opposed to usage errors.
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::InvalidParameter { .. } | Error::Config(_) | Error::LengthMismatch { .. }
        )
    }
}
