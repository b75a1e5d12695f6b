use thiserror::Error;

/// Failures raised by the sequence, class and series operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The evaluation point is too close to a zero of `sin(r x / 2)`.
    #[error("singular point: |sin({r}·x/2)| = {value:e} at x = {x} is below the exclusion tolerance {tol:e}")]
    Singularity { x: f64, r: u64, value: f64, tol: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
