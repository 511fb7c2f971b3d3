use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("not an eigenvalue: singular value ratio {ratio:e} exceeds {tol:e}")]
    NotAnEigenvalue { ratio: f64, tol: f64 },

    #[error(
        "l_max = {l_max} too small: family l = {l_max} has a root at {lambda} \
         not above the largest returned eigenvalue {largest}"
    )]
    LMaxTooSmall { l_max: usize, lambda: f64, largest: f64 },

    #[error("no root with ordinal {ordinal} in family l = {l} at sigma = {sigma}")]
    StartingRootMissing { l: usize, ordinal: usize, sigma: f64 },

    #[error("mass matrix is singular (duplicate trial functions?)")]
    SingularMass,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
