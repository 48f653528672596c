use thiserror::Error;
use torus_quantization::QuantError;

/// Failures of the Toeplitz calculus.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ToeplitzError {
    #[error(transparent)]
    Quant(#[from] QuantError),
    #[error("aliasing: mode ({0}, {1}) is not resolved by a {2}-point grid")]
    Aliasing(i64, i64, usize),
    #[error("reduction mismatch: {0:.3e}")]
    ReductionMismatch(f64),
    #[error("singular U")]
    SingularU,
    #[error("ill-posed fit: rank {rank} for {unknowns} unknowns")]
    IllPosedFit { rank: usize, unknowns: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}
