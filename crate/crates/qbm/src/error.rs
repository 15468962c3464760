use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QbmError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("E1 is undefined on its branch cut (z = {0})")]
    BranchCut(Complex64),

    #[error("{what} diverges")]
    Divergent { what: String },

    #[error("accuracy target missed for {what}: achieved {achieved:.3e}")]
    Accuracy { what: String, achieved: f64 },

    #[error("Wronskian vanishes at t = {t}")]
    Singular { t: f64 },

    #[error("ODE integration failed: {0}")]
    Integration(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl QbmError {
    /// Process exit status for this error: 2 for bad input, 3 for numerics.
    pub fn exit_code(&self) -> i32 {
        match self {
            QbmError::Domain(_)
            | QbmError::Config(_)
            | QbmError::UnsupportedRegime(_)
            | QbmError::Unsupported(_)
            | QbmError::BranchCut(_)
            | QbmError::Io(_) => 2,
            QbmError::Divergent { .. }
            | QbmError::Accuracy { .. }
            | QbmError::Singular { .. }
            | QbmError::Integration(_) => 3,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        QbmError::Domain(msg.into())
    }

    pub(crate) fn accuracy(what: impl Into<String>, achieved: f64) -> Self {
        QbmError::Accuracy { what: what.into(), achieved }
    }
}

pub type Result<T> = std::result::Result<T, QbmError>;
