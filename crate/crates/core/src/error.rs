use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("elements live in different ambient bases")]
    MismatchedBasis,
    #[error("basis has no integrality rule attached")]
    MissingIntegralityRule,
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("measure of the zero element is undefined")]
    ZeroElement,
    #[error("search bound L = {0} is below 1")]
    BoundTooSmall(f64),
    #[error("no integral generator in the search region")]
    NoGenerator,
    #[error("{0}")]
    Usage(String),
    #[error("exponent out of range: {0}")]
    ExponentOutOfRange(String),
    #[error("parameter overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
