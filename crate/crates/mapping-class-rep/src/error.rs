use geometry_core::GeometryError;
use hitchin_connection::HitchinError;
use thiserror::Error;
use torus_quantization::QuantError;

/// Failures of the mapping class machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MappingError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Quant(#[from] QuantError),
    #[error(transparent)]
    Hitchin(#[from] HitchinError),
    #[error("matrix has determinant {0}, expected 1")]
    NotUnimodular(i64),
    #[error("delta sign must be ±1, got {0}")]
    InvalidSign(i32),
    #[error("no level-{k} lift: k·cd = {kcd} or k·ab = {kab} is odd")]
    ParityObstruction { k: usize, kcd: i64, kab: i64 },
    #[error("lift inconsistency: projection residual {0:.3e}")]
    LiftInconsistency(f64),
    #[error("degenerate class: det(A − I) = 0")]
    DegenerateClass,
    #[error("path endpoints do not match: {0}")]
    PathMismatch(String),
    #[error("not projectively proportional: residual {0:.3e}")]
    NotProjectivelyProportional(f64),
    #[error("unresolved peak: probe spacing {spacing:.3e} exceeds width {width:.3e}")]
    UnresolvedPeak { spacing: f64, width: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}
