//! Compatible complex structures on the symplectic torus `R²/Z²` with
//! `ω = 2π dx∧dy`, parametrized by the upper half-plane.
//!
//! The holomorphic coordinate at `τ` is `z = x + τy`. Tangent vectors are
//! complex 2-vectors in the real frame `(∂_x, ∂_y)`. The fixed frames are
//! `∂_z` for `E = T^{1,0}`, `dz` for `K = E*`, and the half-form frame `q`
//! with `q² = dz`. Every coefficient returned by this crate is stated
//! against those frames.

mod error;
mod halfform;
mod path;
mod structure;
mod variation;

pub use error::GeometryError;
pub use halfform::{half_form_transport, pi_projection, HalfFormPhase, MAX_REFINE_DEPTH};
pub use path::{concat, geodesic, reverse, straight, Path};
pub use structure::{complex_structure, omega, ComplexStructureData, TangentU, TeichPoint};
pub use variation::{
    c_function, delta_connection_form, delta_curvature_formula, g_of_x, mu_of_x, GTensor, MuTensor,
};

/// Complex scalar used throughout the workspace.
pub type C64 = num_complex::Complex64;

/// Complex 2-vector in the real frame `(∂_x, ∂_y)`.
pub type CVec2 = [C64; 2];
