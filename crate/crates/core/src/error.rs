use alloc::string::String;

/// Errors raised by the numerical core.
///
/// Every variant maps to a stable, module-qualified code through [`Error::code`],
/// which the command-line frontend prints verbatim.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-finite symbol value at q={q}, k={k}")]
    NonFiniteSample { q: usize, k: i64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("window too large: {0}")]
    WindowTooLarge(String),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("difference window exhausted: {0}")]
    WindowExhausted(String),

    #[error("window mismatch: {left} vs {right}")]
    WindowMismatch { left: usize, right: usize },

    #[error("trusted region is empty: {0}")]
    TrustedRegionEmpty(String),

    #[error("off-diagonal sums have not converged in the Fourier window: {0}")]
    InsufficientDecay(String),

    #[error("block deviates from Hermitian symmetry by {deviation:e}")]
    NonHermitianBlock { deviation: f64 },

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    ConvergenceFailure { iterations: usize },

    #[error("Mikhlin condition rejected (C grew from {c_estimate} to {c_doubled})")]
    MikhlinFailed { c_estimate: f64, c_doubled: f64 },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonFiniteSample { .. } => "symbol_core.NonFiniteSample",
            Error::InvalidGrid(_) => "symbol_core.InvalidGrid",
            Error::WindowTooLarge(_) => "symbol_core.WindowTooLarge",
            Error::WindowExhausted(_) => "symbol_core.WindowExhausted",
            Error::Parse { .. } => "symbol_core.ParseError",
            Error::WindowTooSmall(_) => "assoc_matrix.WindowTooSmall",
            Error::WindowMismatch { .. } => "assoc_matrix.WindowMismatch",
            Error::TrustedRegionEmpty(_) => "spectral.TrustedRegionEmpty",
            Error::InsufficientDecay(_) => "spectral.InsufficientDecay",
            Error::NonHermitianBlock { .. } => "spectral.NonHermitianBlock",
            Error::ConvergenceFailure { .. } => "spectral.ConvergenceFailure",
            Error::MikhlinFailed { .. } => "spectral.MikhlinFailed",
            Error::InvalidArgument(_) => "core.InvalidArgument",
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
