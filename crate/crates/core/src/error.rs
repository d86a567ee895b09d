use thiserror::Error;

/// Errors produced by the geometry, algebra and verification layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid surface: {0}")]
    InvalidSurface(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("degenerate path: {0}")]
    DegeneratePath(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("paths are not in general position: {0}")]
    NotGeneralPosition(String),
    #[error("non-invertible group element (|det| = {0:e})")]
    Singular(f64),
    #[error("numeric domain error: {0}")]
    NumericDomain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
