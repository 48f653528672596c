use geometry_core::GeometryError;
use thiserror::Error;
use torus_quantization::QuantError;

/// Failures of connection assembly, transport and curvature estimation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HitchinError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Quant(#[from] QuantError),
    #[error("holomorphicity violated: residual {0:.3e}")]
    HolomorphicityViolated(f64),
    #[error("nonzero theta-form: {0:.3e}")]
    NonzeroThetaForm(f64),
    #[error("loop too large: holonomy defect {0:.3e}")]
    LoopTooLarge(f64),
    #[error("ODE nonconvergence at parameter {0}")]
    OdeNonconvergence(f64),
    #[error("ODE tolerance {0} outside [1e-12, 1e-6]")]
    InvalidTolerance(f64),
    #[error("connection dimension mismatch: {0}")]
    Dimension(String),
}
