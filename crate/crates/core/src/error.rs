use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no convergence in {what} after {iterations} iterations (residual {residual:e})")]
    NonConvergence { what: String, iterations: usize, residual: f64 },

    #[error("mode set does not cover frequencies below {required}: truncation stops at {available}")]
    Coverage { required: f64, available: f64 },

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error(
        "Picard iteration diverged at t = {time} after {iterations} iterations \
         (last increment {residual:e}); reduce dt"
    )]
    PicardDivergence { time: f64, iterations: usize, residual: f64 },

    #[error("mode sets differ")]
    ModeSetMismatch,

    #[error("invalid snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
