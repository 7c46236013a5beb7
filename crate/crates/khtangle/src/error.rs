use thiserror::Error;

#[derive(Debug, Error)]
pub enum KhError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("non-planar rotation system: {0}")]
    NonPlanar(String),

    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),

    #[error("unoriented component: {0}")]
    Unoriented(String),

    #[error("verification failure: {0}")]
    Verification(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, KhError>;
