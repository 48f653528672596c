//! The Hitchin connection with metaplectic correction,
//! `∇_X + (1/4k)(Δ^{G(X)} − H(X))` on `L^k ⊗ δ`, and the Toeplitz connection
//! `Π ∘ ∇_X`, both as matrix 1-forms in the theta frame.
//!
//! A form `A(X)` acts by `∇_X s ↦ X(c) + A(X) c` on frame coordinates, so
//! transport solves `U' = −A(γ') U`.

mod error;
mod forms;
mod ode;
mod operators;
mod transport;

pub use error::HitchinError;
pub use forms::{
    anti_hermitian_residual, hitchin_form, toeplitz_form, Connection, ConnectionForm,
    ConstantConnection, FormComponent, HalfFormConnection, HitchinConnection, ToeplitzConnection,
    Which,
};
pub use ode::{dopri5, OdeStats};
pub use operators::{
    delta_g_apply, delta_g_apply_series, h_of_x, prel_comp_residual, theta_delta_residual,
};
pub use transport::{
    curvature_estimate, curvature_with, holonomy, parallel_transport, transport_with,
    CurvatureSample, TransportResult,
};
