use thiserror::Error;

/// Errors raised by library operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("singular matrix")]
    Singular,
    #[error("matrix is not positive definite (eigenvalue {0:e})")]
    NotPositiveDefinite(f64),
    #[error("ill-conditioned decomposition: {0}")]
    IllConditioned(String),
    #[error("numerical degeneracy: {0}")]
    Degenerate(String),
    #[error("size {size} exceeds desk-scale cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag, used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Shape(_) => "shape",
            Error::DimMismatch(_) => "dim_mismatch",
            Error::Domain(_) => "domain",
            Error::Precondition(_) => "precondition",
            Error::Singular => "singular",
            Error::NotPositiveDefinite(_) => "not_positive_definite",
            Error::IllConditioned(_) => "ill_conditioned",
            Error::Degenerate(_) => "degenerate",
            Error::TooLarge { .. } => "too_large",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
