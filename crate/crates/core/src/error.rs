use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point lies outside the open unit ball (|q| = {modulus})")]
    OutsideBall { modulus: f64 },

    #[error("imaginary unit has length {length}, expected 1")]
    NotUnit { length: f64 },

    #[error("imaginary units are not orthogonal (<I, J> = {dot})")]
    NotOrthogonal { dot: f64 },

    #[error("invalid space specification: {0}")]
    InvalidSpace(String),

    #[error("invalid quadrature specification: {0}")]
    InvalidQuadrature(String),

    #[error("exponent p = {0} must be a finite real >= 1")]
    InvalidExponent(f64),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid arc family: {0}")]
    InvalidArcs(String),

    #[error("invalid scan parameters: {0}")]
    InvalidScan(String),

    #[error("test family is empty")]
    EmptyFamily,

    #[error("test family member {index} has zero space norm")]
    ZeroNormMember { index: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
