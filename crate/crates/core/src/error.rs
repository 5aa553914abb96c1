use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error("precision loss: {0}")]
    PrecisionLoss(String),

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e}, {evals} evaluations")]
    Quadrature { estimate: f64, error: f64, evals: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("internal consistency: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
