use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("pole of {0}")]
    Pole(&'static str),
    #[error("{what} did not converge after {terms} terms")]
    NonConvergence { what: &'static str, terms: usize },
    #[error("routes disagree for {what}: relative difference {diff:.3e}")]
    RouteDisagreement { what: &'static str, diff: f64 },
    #[error("route {0} is not applicable to these arguments")]
    RouteUnavailable(&'static str),
    #[error("Laplace inversion contour failed: {0}")]
    ContourFailure(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("aliasing: {0}")]
    Aliasing(String),
    #[error("record ends at {end} but {needed} is required")]
    HorizonTooShort { end: f64, needed: f64 },
    #[error("zero input energy")]
    ZeroInput,
    #[error("integration diverged at step {step}: energy ratio {ratio:.3e}")]
    Divergence { step: usize, ratio: f64 },
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
