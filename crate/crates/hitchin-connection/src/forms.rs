use crate::HitchinError;
use geometry_core::{delta_connection_form, g_of_x, TangentU, TeichPoint, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use torus_quantization::linalg::{max_abs, to_rows, CMat};
use torus_quantization::{build_frame, Level, QuantumFrame, SectionVector};

/// Which connection on the bundle of quantum spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Hitchin,
    Toeplitz,
}

/// `A(X)` in the theta frame and the relative norm of the part of
/// `∇_X θ_l` that falls outside the frame span.
#[derive(Debug, Clone, PartialEq)]
pub struct FormComponent {
    pub matrix: CMat,
    pub residual: f64,
}

/// A connection 1-form split as `A(X) = A_dτ·Xτ + A_dτ̄·conj(Xτ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionForm {
    pub tau: TeichPoint,
    pub a_dtau: CMat,
    pub a_dtaubar: CMat,
}

impl ConnectionForm {
    /// Assembles the split from the real-linear values on `∂_{Re τ}` and
    /// `∂_{Im τ}`.
    pub fn from_real_values(tau: TeichPoint, a_re: &CMat, a_im: &CMat) -> Self {
        let i = C64::new(0.0, 1.0);
        Self {
            tau,
            a_dtau: (a_re - a_im * i) * C64::new(0.5, 0.0),
            a_dtaubar: (a_re + a_im * i) * C64::new(0.5, 0.0),
        }
    }

    pub fn apply(&self, x: TangentU) -> CMat {
        &self.a_dtau * x.dtau + &self.a_dtaubar * x.dtau.conj()
    }

    /// JSON with matrices as row-major `[re, im]` rows.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "tau": [self.tau.re(), self.tau.im()],
            "a_dtau": to_rows(&self.a_dtau),
            "a_dtaubar": to_rows(&self.a_dtaubar),
        })
    }
}

/// Term weight of `(∂_X + a(X) + (1/4k) G(X) ∇_z∇_z)` on a theta term.
///
/// `∂_τ` of a term is `iπk t²`, and `∇_z∇_z` of a term is
/// `πk/Im τ − 4π²k²t²`.
fn hitchin_weight(frame: &QuantumFrame, x: TangentU) -> impl Fn(f64) -> C64 {
    let tau = frame.tau();
    let kf = frame.k() as f64;
    let g = g_of_x(tau, x).coeff;
    let a = delta_connection_form(tau, x);
    let v = tau.im();
    let dt = x.dtau;
    move |t: f64| {
        let t2 = t * t;
        C64::new(0.0, PI * kf * t2) * dt
            + a
            + g * (PI * kf / v - 4.0 * PI * PI * kf * kf * t2) / (4.0 * kf)
    }
}

/// Term weight of the bare `∂_X + a(X)`.
fn bare_weight(frame: &QuantumFrame, x: TangentU) -> impl Fn(f64) -> C64 {
    let kf = frame.k() as f64;
    let a = delta_connection_form(frame.tau(), x);
    let dt = x.dtau;
    move |t: f64| C64::new(0.0, PI * kf * t * t) * dt + a
}

fn expand(frame: &QuantumFrame, w: &impl Fn(f64) -> C64, with_residual: bool) -> FormComponent {
    let k = frame.k();
    let mut products = CMat::zeros(k, k);
    for l in 0..k {
        products.set_column(l, &frame.weighted_products(l, w));
    }
    let matrix = frame.gram_inv() * products;
    let mut residual = 0.0f64;
    if with_residual {
        for l in 0..k {
            let mut rest = frame.basis_field(l, w);
            let col = SectionVector(matrix.column(l).into_owned());
            rest.add_assign(&frame.synthesize(&col), C64::new(-1.0, 0.0));
            let own = frame.gram()[(l, l)].re.sqrt();
            residual = residual.max(rest.norm() / own);
        }
    }
    FormComponent { matrix, residual }
}

/// Matrix of `∇_X + (1/4k)Δ^{G(X)}` on the frame (`H(X) = 0` on the torus),
/// with the out-of-span residual of the expansion.
///
/// Errors with `HolomorphicityViolated` when the residual exceeds ten times
/// the frame tolerance.
pub fn hitchin_form(frame: &QuantumFrame, x: TangentU) -> Result<FormComponent, HitchinError> {
    let out = expand(frame, &hitchin_weight(frame, x), true);
    if out.residual > 10.0 * frame.tol().max(1e-12) {
        return Err(HitchinError::HolomorphicityViolated(out.residual));
    }
    Ok(out)
}

/// Matrix of `Π ∘ ∇^{L^k⊗δ}_X` on the frame, with the out-of-span residual
/// of the unprojected derivative.
pub fn toeplitz_form(frame: &QuantumFrame, x: TangentU) -> FormComponent {
    expand(frame, &bare_weight(frame, x), true)
}

/// `max |G A + Aᴴ G|`, the defect of `A` from being anti-Hermitian for the
/// Gram metric.
pub fn anti_hermitian_residual(frame: &QuantumFrame, a: &CMat) -> f64 {
    let g = frame.gram();
    max_abs(&(g * a + a.adjoint() * g))
}

/// A matrix-valued connection 1-form on a trivialized bundle over the
/// upper half-plane.
pub trait Connection: Sync {
    fn dim(&self) -> usize;
    fn form(&self, tau: TeichPoint, x: TangentU) -> Result<CMat, HitchinError>;
}

/// The Hitchin connection at level `k`, frames built at tolerance `tol`.
#[derive(Debug, Clone, Copy)]
pub struct HitchinConnection {
    pub k: Level,
    pub tol: f64,
}

impl Connection for HitchinConnection {
    fn dim(&self) -> usize {
        self.k.get()
    }

    fn form(&self, tau: TeichPoint, x: TangentU) -> Result<CMat, HitchinError> {
        let frame = build_frame(self.k, tau, self.tol)?;
        Ok(expand(&frame, &hitchin_weight(&frame, x), false).matrix)
    }
}

/// The Toeplitz connection at level `k`.
#[derive(Debug, Clone, Copy)]
pub struct ToeplitzConnection {
    pub k: Level,
    pub tol: f64,
}

impl Connection for ToeplitzConnection {
    fn dim(&self) -> usize {
        self.k.get()
    }

    fn form(&self, tau: TeichPoint, x: TangentU) -> Result<CMat, HitchinError> {
        let frame = build_frame(self.k, tau, self.tol)?;
        Ok(expand(&frame, &bare_weight(&frame, x), false).matrix)
    }
}

/// `A(X) = Re(Xτ)·a_re + Im(Xτ)·a_im`, constant in `τ`.
#[derive(Debug, Clone)]
pub struct ConstantConnection {
    pub a_re: CMat,
    pub a_im: CMat,
}

impl Connection for ConstantConnection {
    fn dim(&self) -> usize {
        self.a_re.nrows()
    }

    fn form(&self, _tau: TeichPoint, x: TangentU) -> Result<CMat, HitchinError> {
        Ok(&self.a_re * C64::new(x.dtau.re, 0.0) + &self.a_im * C64::new(x.dtau.im, 0.0))
    }
}

/// The rank-one half-form connection `a(X)` on `δ`.
#[derive(Debug, Clone, Copy, Default)]
pub struct HalfFormConnection;

impl Connection for HalfFormConnection {
    fn dim(&self) -> usize {
        1
    }

    fn form(&self, tau: TeichPoint, x: TangentU) -> Result<CMat, HitchinError> {
        Ok(CMat::from_element(1, 1, delta_connection_form(tau, x)))
    }
}

impl Which {
    /// The connection of this kind at level `k`.
    pub fn at_level(self, k: Level, tol: f64) -> Box<dyn Connection> {
        match self {
            Which::Hitchin => Box::new(HitchinConnection { k, tol }),
            Which::Toeplitz => Box::new(ToeplitzConnection { k, tol }),
        }
    }
}
