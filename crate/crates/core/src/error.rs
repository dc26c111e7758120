use thiserror::Error;

/// Errors raised by the library. Every variant has a stable short code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McKayError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid character table asset: {0}")]
    AssetInvalid(String),
    #[error("non-integral McKay multiplicity between vertices {0} and {1}")]
    NonIntegralMultiplicity(usize, usize),
    #[error("graph is not of affine ADE type: {0}")]
    NotAffineADE(String),
    #[error("orbit search exceeded coefficient bound {0}")]
    BoundExceeded(i64),
    #[error("enumeration budget of {0} visited nodes exceeded")]
    BudgetExceeded(u64),
    #[error("unsupported output format: {0}")]
    UnsupportedFormat(String),
    #[error("no explicit matrix model for {0}")]
    UnsupportedFamily(String),
    #[error("bracket trace vanishes on edge {0}")]
    DegenerateBracket(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("point is not fixed by the group action: {0}")]
    NotFixed(String),
    #[error("point is not stable")]
    NotStable,
    #[error("stability vector lies on wall {0}")]
    OnWall(String),
}

impl McKayError {
    pub fn code(&self) -> &'static str {
        match self {
            McKayError::InvalidParameter(_) => "InvalidParameter",
            McKayError::AssetInvalid(_) => "AssetInvalid",
            McKayError::NonIntegralMultiplicity(..) => "NonIntegralMultiplicity",
            McKayError::NotAffineADE(_) => "NotAffineADE",
            McKayError::BoundExceeded(_) => "BoundExceeded",
            McKayError::BudgetExceeded(_) => "BudgetExceeded",
            McKayError::UnsupportedFormat(_) => "UnsupportedFormat",
            McKayError::UnsupportedFamily(_) => "UnsupportedFamily",
            McKayError::DegenerateBracket(_) => "DegenerateBracket",
            McKayError::DimensionMismatch(_) => "DimensionMismatch",
            McKayError::NotFixed(_) => "NotFixed",
            McKayError::NotStable => "NotStable",
            McKayError::OnWall(_) => "OnWall",
        }
    }
}

pub type Result<T> = std::result::Result<T, McKayError>;
