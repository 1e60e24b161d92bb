use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument or configuration field is outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// A root or bracket search did not converge.
    #[error("convergence failed: {0}")]
    Convergence(String),

    /// Spectral efficiency is zero, so energy per bit is unbounded.
    #[error("bit energy is infinite (zero spectral efficiency)")]
    InfiniteBitEnergy,

    /// The minimizer of a grid search sits on the grid boundary.
    #[error("minimizer at grid endpoint {index} (snr = {snr}); widen the grid")]
    GridEndpoint { index: usize, snr: f64 },

    #[error("insufficient tail: {0}")]
    InsufficientTail(String),

    #[error("degenerate queue: {0}")]
    Degenerate(String),

    #[error("queue length exceeded {limit} bits at frame {frame}")]
    QueueOverflow { frame: u64, limit: f64 },
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
