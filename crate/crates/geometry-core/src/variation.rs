use crate::structure::{omega, TangentU, TeichPoint};
use crate::{CVec2, GeometryError, C64};
use serde::{Deserialize, Serialize};

/// `μ(X)` in the frame `∂_z ⊗ dz̄`. Constant over the torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuTensor {
    pub coeff: C64,
}

/// `G(X)` in the frame `∂_z ⊗ ∂_z`. Constant over the torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GTensor {
    pub coeff: C64,
}

impl GTensor {
    pub fn zero() -> Self {
        Self {
            coeff: C64::new(0.0, 0.0),
        }
    }
}

/// Derivative of `j_matrix` along `X`, computed in closed form.
fn dj(tau: TeichPoint, x: TangentU) -> [[f64; 2]; 2] {
    let (u, v) = (tau.re(), tau.im());
    let (a, b) = (x.dtau.re, x.dtau.im);
    let n2 = u * u + v * v;
    let dn2 = 2.0 * (u * a + v * b);
    // j = (1/v) M with M = [[−u, −|τ|²], [1, u]]
    let m = [[-u, -n2], [1.0, u]];
    let dm = [[-a, -dn2], [0.0, a]];
    let mut out = [[0.0; 2]; 2];
    for r in 0..2 {
        for s in 0..2 {
            out[r][s] = dm[r][s] / v - m[r][s] * b / (v * v);
        }
    }
    out
}

fn apply(m: &[[f64; 2]; 2], w: CVec2) -> CVec2 {
    [
        w[0] * m[0][0] + w[1] * m[0][1],
        w[0] * m[1][0] + w[1] * m[1][1],
    ]
}

/// The `Ē → E` part of `X.j`, read off as `dz((X.j) ∂_z̄)`.
///
/// Equals `−dtau / Im τ`.
pub fn mu_of_x(tau: TeichPoint, x: TangentU) -> MuTensor {
    let image = apply(&dj(tau, x), tau.d_zbar());
    MuTensor {
        coeff: tau.dz(image),
    }
}

/// Solves `G ω(∂_z, ·) ∂_z = μ(X)` on `Ē`, that is `G = μ / ω(∂_z, ∂_z̄)`.
///
/// Equals `i dtau / π`.
pub fn g_of_x(tau: TeichPoint, x: TangentU) -> GTensor {
    let mu = mu_of_x(tau, x).coeff;
    let w = omega(tau.d_z(), tau.d_zbar());
    GTensor { coeff: mu / w }
}

/// Derivative of the vector field `τ ↦ ∂_{z_τ}` along `X`.
fn d_of_dz_vector(tau: TeichPoint, x: TangentU) -> CVec2 {
    let t = tau.tau();
    let dt = x.dtau;
    let den = t - t.conj();
    let dden = dt - dt.conj();
    // e = (−τ̄, 1)/den
    let num = [-t.conj(), C64::new(1.0, 0.0)];
    let dnum = [-dt.conj(), C64::new(0.0, 0.0)];
    [
        dnum[0] / den - num[0] * dden / (den * den),
        dnum[1] / den - num[1] * dden / (den * den),
    ]
}

/// Coefficient `a` of the half-form connection: `∇^δ_X q = a q`.
///
/// The connection on `E` is `π ∘ d`, so `∇_X ∂_z = b ∂_z` with
/// `b = dz(X(∂_z))`. Leibniz against the pairing gives `∇_X dz = −b dz` on
/// `K`, and `q² = dz` gives `a = −b/2 = −i dtau / (4 Im τ)`.
pub fn delta_connection_form(tau: TeichPoint, x: TangentU) -> C64 {
    let b = tau.dz(d_of_dz_vector(tau, x));
    -b / 2.0
}

/// `(1/8) tr(μ(X)μ̄(Y) − μ(Y)μ̄(X))`, the predicted curvature of `∇^δ`.
pub fn delta_curvature_formula(tau: TeichPoint, x: TangentU, y: TangentU) -> C64 {
    let mx = mu_of_x(tau, x).coeff;
    let my = mu_of_x(tau, y).coeff;
    (mx * my.conj() - my * mx.conj()) / 8.0
}

/// `c = (1/4) Σ ω(μ(∂̄_i), ∂̄_i)` for the `(1,0)` frame adapted to a
/// Lagrangian subspace.
///
/// The subspace is the span of `frame`. On the torus it is a line, so the
/// adapted frame is the single vector `∂_1 = t·dz(ℓ)·∂_z`, where `ℓ` is the
/// first nonzero vector and `t > 0` gives `(1/i) ω(∂_1, ∂̄_1) = 1`.
pub fn c_function(tau: TeichPoint, x: TangentU, frame: &[[f64; 2]]) -> Result<C64, GeometryError> {
    let to_c = |l: &[f64; 2]| [C64::new(l[0], 0.0), C64::new(l[1], 0.0)];
    let scale = frame
        .iter()
        .map(|l| l[0].abs() + l[1].abs())
        .fold(0.0, f64::max);
    for (i, a) in frame.iter().enumerate() {
        for b in &frame[i + 1..] {
            let w = omega(to_c(a), to_c(b)).norm();
            if w > 1e-12 * scale.max(1.0) * scale.max(1.0) {
                return Err(GeometryError::FrameNotLagrangian(w));
            }
        }
    }
    let ell = frame
        .iter()
        .find(|l| l[0].abs() + l[1].abs() > 1e-14 * scale.max(1.0))
        .ok_or(GeometryError::NormalizationUnattainable)?;
    let p = tau.dz(to_c(ell));
    let pairing = p.norm_sqr() * (tau.omega_zzbar() / C64::new(0.0, 1.0)).re;
    if !(pairing > 0.0 && pairing.is_finite()) {
        return Err(GeometryError::NormalizationUnattainable);
    }
    let t2 = 1.0 / pairing;
    let mu = mu_of_x(tau, x).coeff;
    Ok(t2 * p.conj() * p.conj() * mu * tau.omega_zzbar() / 4.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::complex_structure;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn closed_forms() {
        let t = TeichPoint::from_parts(0.3, 1.7).unwrap();
        let x = TangentU::new(c(0.4, -1.1));
        assert!((mu_of_x(t, x).coeff + x.dtau / t.im()).norm() < 1e-14);
        let g = g_of_x(t, x).coeff;
        assert!((g - c(0.0, 1.0) * x.dtau / std::f64::consts::PI).norm() < 1e-14);
        let a = delta_connection_form(t, x);
        assert!((a + c(0.0, 1.0) * x.dtau / (4.0 * t.im())).norm() < 1e-14);
    }

    #[test]
    fn dj_matches_central_difference() {
        let t = TeichPoint::from_parts(-0.7, 0.6).unwrap();
        let x = TangentU::new(c(0.2, 0.9));
        let h = 1e-5;
        let jp = complex_structure(TeichPoint::new(t.tau() + x.dtau * h).unwrap()).j_matrix;
        let jm = complex_structure(TeichPoint::new(t.tau() - x.dtau * h).unwrap()).j_matrix;
        let d = dj(t, x);
        for r in 0..2 {
            for s in 0..2 {
                assert!(((jp[r][s] - jm[r][s]) / (2.0 * h) - d[r][s]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn c_function_on_square_torus() {
        let v = c_function(TeichPoint::i(), TangentU::d_im(), &[[1.0, 0.0]]).unwrap();
        assert!((v - 0.25).norm() < 1e-14);
        let e = c_function(TeichPoint::i(), TangentU::d_im(), &[[1.0, 0.0], [0.0, 1.0]]);
        assert!(matches!(e, Err(GeometryError::FrameNotLagrangian(_))));
        let z = c_function(TeichPoint::i(), TangentU::d_im(), &[[0.0, 0.0]]);
        assert_eq!(z, Err(GeometryError::NormalizationUnattainable));
    }
}
