use thiserror::Error;

/// Failures of the geometric operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    /// The point is not in the upper half-plane or is not finite.
    #[error("domain error: {0}")]
    Domain(String),
    /// Square-root tracking along a path could not be made unambiguous.
    #[error("sampling too coarse after {0} refinements")]
    SamplingTooCoarse(usize),
    /// The symplectic form does not vanish on the supplied frame.
    #[error("frame not Lagrangian (|ω| = {0:.3e})")]
    FrameNotLagrangian(f64),
    /// The normalized `(1,0)` frame cannot be built from the input.
    #[error("normalization unattainable")]
    NormalizationUnattainable,
}
