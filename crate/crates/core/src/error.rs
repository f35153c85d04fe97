use thiserror::Error;

use crate::kernel::KernelExpansion;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of subdivisions before reaching its tolerance.
    #[error(
        "quadrature did not converge at x={x}, y={y}: estimate {estimate:e}, \
         achieved error {achieved_error:e}"
    )]
    Quadrature {
        x: f64,
        y: f64,
        estimate: f64,
        achieved_error: f64,
    },

    /// The coefficient fitter hit its iteration cap.
    #[error("fit did not converge within {iterations} iterations (best objective {objective:e})")]
    FitNonConvergence {
        best: KernelExpansion,
        objective: f64,
        iterations: u64,
    },

    #[error("invalid coefficient table: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
