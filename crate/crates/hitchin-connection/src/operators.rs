use crate::HitchinError;
use geometry_core::{GTensor, TangentU, TeichPoint, C64};
use std::f64::consts::PI;
use torus_quantization::{
    nabla_z_samples, nabla_zbar_samples, QuantumFrame, SectionVector, SpectralField,
};

/// `Δ^G s = G ∇_z∇_z s` on grid samples, by spectral differentiation.
///
/// On the flat torus the trace over `T^{1,0}` and the Levi-Civita part of
/// `∇^{T^{1,0}⊗L^k}` reduce the general operator to this form.
pub fn delta_g_apply(frame: &QuantumFrame, g: GTensor, samples: &[C64]) -> Vec<C64> {
    let (n, k, tau) = (frame.n_g(), frame.k(), frame.tau());
    let once = nabla_z_samples(n, k, tau, samples);
    nabla_z_samples(n, k, tau, &once)
        .into_iter()
        .map(|z| z * g.coeff)
        .collect()
}

/// `Δ^G` of a frame section by term-wise differentiation of the theta
/// series: each term is multiplied by `G(πk/Im τ − 4π²k²t²)`.
pub fn delta_g_apply_series(frame: &QuantumFrame, g: GTensor, s: &SectionVector) -> SpectralField {
    let kf = frame.k() as f64;
    let v = frame.tau().im();
    let mut out = SpectralField::zeros(frame.n_g());
    for l in 0..frame.k() {
        if s.0[l] == C64::new(0.0, 0.0) {
            continue;
        }
        let w = |t: f64| g.coeff * (PI * kf / v - 4.0 * PI * PI * kf * kf * t * t);
        out.add_assign(&frame.basis_field(l, w), s.0[l]);
    }
    out
}

/// Largest value of `θ^δ(∂_z̄) = ∇_z(R^δ(∂_z̄, ∂_z) G)` over an `n×n` grid on
/// the slice `M_τ`.
///
/// The slice connection of `δ` is read off the position dependence of the
/// frame field `∂_z` by central differences, and its curvature and the
/// divergence above by further differences.
pub fn theta_delta_residual(tau: TeichPoint, x: TangentU, n: usize) -> f64 {
    let g = geometry_core::g_of_x(tau, x).coeff;
    let h = 1.0 / n as f64;
    // Frame field of E over the slice; translation invariant on the torus.
    let frame_field = |_px: f64, _py: f64| tau.d_z();
    // b_w(p) = dz(∂_w e)(p), the E-connection coefficient along ∂_w.
    let conn = |px: f64, py: f64, dir: usize| {
        let (ox, oy) = if dir == 0 { (h, 0.0) } else { (0.0, h) };
        let p = frame_field(px + ox, py + oy);
        let m = frame_field(px - ox, py - oy);
        let d = [(p[0] - m[0]) / (2.0 * h), (p[1] - m[1]) / (2.0 * h)];
        -tau.dz(d) / 2.0
    };
    // Curvature R(∂_x, ∂_y) of the δ slice connection.
    let curv = |px: f64, py: f64| {
        (conn(px + h, py, 1) - conn(px - h, py, 1)) / (2.0 * h)
            - (conn(px, py + h, 0) - conn(px, py - h, 0)) / (2.0 * h)
    };
    // R(∂_z̄, ∂_z) = dx∧dy(∂_z̄, ∂_z)·R(∂_x, ∂_y).
    let e = tau.d_z();
    let eb = tau.d_zbar();
    let area = eb[0] * e[1] - eb[1] * e[0];
    let r_zbar_z = |px: f64, py: f64| curv(px, py) * area * g;
    let mut worst = 0.0f64;
    for b in 0..n {
        for a in 0..n {
            let (px, py) = (a as f64 * h, b as f64 * h);
            let dxr = (r_zbar_z(px + h, py) - r_zbar_z(px - h, py)) / (2.0 * h);
            let dyr = (r_zbar_z(px, py + h) - r_zbar_z(px, py - h)) / (2.0 * h);
            let theta = e[0] * dxr + e[1] * dyr;
            worst = worst.max(theta.norm());
        }
    }
    worst
}

/// `H(X)` on an `n×n` grid: identically zero, after checking that
/// `θ^δ = 0` so that zero solves `∂̄H = θ^δ`, `∫H = 0`.
pub fn h_of_x(tau: TeichPoint, x: TangentU, n: usize) -> Result<Vec<f64>, HitchinError> {
    let r = theta_delta_residual(tau, x, n.clamp(4, 32));
    if r > 1e-10 {
        return Err(HitchinError::NonzeroThetaForm(r));
    }
    Ok(vec![0.0; n * n])
}

/// Relative defect of the commutator identity
/// `∇_z̄ Δ^G s − Δ^G ∇_z̄ s = 2 R(∂_z̄, ∂_z) G ∇_z s + θ`, with
/// `R(∂_z̄, ∂_z) = −πk/Im τ` for `L^k` and `θ = 0`, on grid samples.
///
/// On holomorphic `s` the second term on the left vanishes and this is
/// `∂̄ Δ^G = 2 R^F(·, ∂_z) G ∇_z`.
pub fn prel_comp_residual(frame: &QuantumFrame, g: GTensor, samples: &[C64]) -> f64 {
    let (n, k, tau) = (frame.n_g(), frame.k(), frame.tau());
    let lhs1 = nabla_zbar_samples(n, k, tau, &delta_g_apply(frame, g, samples));
    let lhs2 = delta_g_apply(frame, g, &nabla_zbar_samples(n, k, tau, samples));
    let r = -PI * k as f64 / tau.im();
    let rhs: Vec<C64> = nabla_z_samples(n, k, tau, samples)
        .into_iter()
        .map(|z| z * g.coeff * (2.0 * r))
        .collect();
    let num: f64 = lhs1
        .iter()
        .zip(&lhs2)
        .zip(&rhs)
        .map(|((a, b), c)| (a - b - c).norm_sqr())
        .sum();
    let den: f64 = rhs.iter().map(|z| z.norm_sqr()).sum();
    (num / den.max(f64::MIN_POSITIVE)).sqrt()
}
