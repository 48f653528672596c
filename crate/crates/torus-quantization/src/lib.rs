//! Quantum spaces `H_{k,τ} = H⁰(M_τ, L^k ⊗ δ_τ)` on the torus.
//!
//! # Gauge and theta convention
//!
//! The prequantum connection is `∇ = d + 2πik y dx` (curvature `−ikω` with
//! `ω = 2π dx∧dy`). Sections of `L^k` are functions with
//!
//! * `s(x + 1, y) = s(x, y)`,
//! * `s(x, y + 1) = e^{−2πikx} s(x, y)`.
//!
//! The frame of `H_{k,τ}` is `θ_l ⊗ q_τ`, `l = 0..k`, where
//!
//! `θ_l(x, y) = Σ_n exp(iπkτ t² + 2πi(kn + l)x)`, `t = n + l/k + y`,
//!
//! and `q_τ² = dz_τ`. Unit-frame values carry the half-form weight
//! `|q_τ| = (Im τ/π)^{1/4}`. The inner product is
//! `⟨s₁, s₂⟩ = ∫ s̄₁ s₂ · 2π dx dy`, conjugate-linear in the first slot.
//! The Gram matrix of this frame is exactly `sqrt(2π/k)·I` for every `τ`.
//!
//! # Grid representation
//!
//! Fields live on the uniform `N×N` grid `(a/N, b/N)` and are stored by
//! their discrete Fourier transform along `x`, see [`SpectralField`].

mod error;
mod frame;
pub mod linalg;
mod spectral;

pub use error::QuantError;
pub use frame::{
    build_frame, build_frame_with_grid, grid_floor, truncation_radius, Entry, FrameDescriptor,
    Level, QuantumFrame, SectionVector, TRUNCATION_CAP,
};
pub use spectral::{
    nabla_z_samples, nabla_zbar_samples, partial_x_samples, partial_y_samples, SpectralField,
};

pub use geometry_core::C64;
