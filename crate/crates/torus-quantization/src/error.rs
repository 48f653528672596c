use geometry_core::GeometryError;
use thiserror::Error;

/// Failures of frame construction and projection.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("level must be at least 1, got {0}")]
    InvalidLevel(i64),
    #[error("tolerance {0} outside (0, 1e-6]")]
    InvalidTolerance(f64),
    #[error("truncation overflow: {needed} lattice terms needed, cap is {cap}")]
    TruncationOverflow { needed: usize, cap: usize },
    #[error("rank deficient: gram rank {rank} for level {k}")]
    RankDeficient { rank: usize, k: usize },
    #[error("descriptor mismatch: gram differs by {0:.3e} after reload")]
    DescriptorMismatch(f64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("descriptor parse error: {0}")]
    Json(String),
}
