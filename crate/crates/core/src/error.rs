//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("p = -{n} is a pole of the exponents n/(n+p) and n(1-p)/(n+p)")]
    PoleAtMinusN { n: u32 },
    #[error("dimension {0} is not supported here")]
    UnsupportedDimension(u32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("direction {0:?} lies on an edge or flat face; the Gauss map is not invertible there")]
    EdgeOrFace(Vec<f64>),
    #[error("matrix is not orthogonal (deviation {0:.3e})")]
    NonOrthogonal(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
