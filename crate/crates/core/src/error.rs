use thiserror::Error;

/// Errors raised while building or solving a master equation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix lacks the two-block parity structure (off-block magnitude {off_block:e})")]
    NotParityBlocked { off_block: f64 },

    #[error("principal-value quadrature did not converge at omega = {omega}: error estimate {estimate:e} exceeds {tolerance:e}")]
    QuadratureNonConvergence {
        omega: f64,
        estimate: f64,
        tolerance: f64,
    },

    #[error(
        "frequency crossing omega_II = omega_IV (lambda = {lambda}, omega_+ = {omega_plus}, omega_- = {omega_minus}, residual = {residual:e}); x-z cross terms cannot be dropped here"
    )]
    CrossingSingularity {
        lambda: f64,
        omega_plus: f64,
        omega_minus: f64,
        residual: f64,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("adaptive step failed at t = {time}: {reason}")]
    StepFailure { time: f64, reason: String },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("steady state is degenerate (nullity {nullity}); an initial state is required")]
    DegenerateSteadyState { nullity: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
