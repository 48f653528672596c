use crate::{CVec2, GeometryError, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A complex structure parameter `τ` with `Im τ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TeichPoint {
    tau: C64,
}

impl TeichPoint {
    /// Validates `Im τ > 0` and finiteness.
    pub fn new(tau: C64) -> Result<Self, GeometryError> {
        if !(tau.re.is_finite() && tau.im.is_finite()) {
            return Err(GeometryError::Domain(format!("tau = {tau} is not finite")));
        }
        if tau.im <= 0.0 {
            return Err(GeometryError::Domain(format!(
                "Im tau = {} must be positive",
                tau.im
            )));
        }
        Ok(Self { tau })
    }

    /// Shorthand for `TeichPoint::new(C64::new(re, im))`.
    pub fn from_parts(re: f64, im: f64) -> Result<Self, GeometryError> {
        Self::new(C64::new(re, im))
    }

    /// The square torus `τ = i`.
    pub fn i() -> Self {
        Self {
            tau: C64::new(0.0, 1.0),
        }
    }

    pub fn tau(&self) -> C64 {
        self.tau
    }

    pub fn re(&self) -> f64 {
        self.tau.re
    }

    pub fn im(&self) -> f64 {
        self.tau.im
    }

    /// Vector `∂_z = (∂_y − τ̄∂_x)/(τ − τ̄)` in the real frame.
    pub fn d_z(&self) -> CVec2 {
        let t = self.tau;
        let den = t - t.conj();
        [-t.conj() / den, C64::new(1.0, 0.0) / den]
    }

    /// Vector `∂_z̄`, the conjugate of [`TeichPoint::d_z`].
    pub fn d_zbar(&self) -> CVec2 {
        let e = self.d_z();
        [e[0].conj(), e[1].conj()]
    }

    /// Pairing of the covector `dz = dx + τ dy` with a complex vector.
    pub fn dz(&self, w: CVec2) -> C64 {
        w[0] + self.tau * w[1]
    }

    /// `ω(∂_z, ∂_z̄) = iπ / Im τ`.
    pub fn omega_zzbar(&self) -> C64 {
        C64::new(0.0, PI / self.im())
    }

    /// Unit-frame factor of the half-form frame: `|q|² = |dz| = sqrt(Im τ/π)`,
    /// so `|q| = (Im τ/π)^{1/4}`.
    pub fn half_form_weight(&self) -> f64 {
        (self.im() / PI).powf(0.25)
    }
}

/// Real tangent vector to the upper half-plane, `a·∂_{Re τ} + b·∂_{Im τ}`
/// encoded as `dtau = a + ib`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentU {
    pub dtau: C64,
}

impl TangentU {
    pub fn new(dtau: C64) -> Self {
        Self { dtau }
    }

    pub fn zero() -> Self {
        Self {
            dtau: C64::new(0.0, 0.0),
        }
    }

    /// `∂_{Re τ}`.
    pub fn d_re() -> Self {
        Self {
            dtau: C64::new(1.0, 0.0),
        }
    }

    /// `∂_{Im τ}`.
    pub fn d_im() -> Self {
        Self {
            dtau: C64::new(0.0, 1.0),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dtau: self.dtau * s,
        }
    }
}

/// The complex structure at `τ` on the `(x, y)` torus coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexStructureData {
    pub tau: TeichPoint,
    /// Matrix of `j` acting on column vectors `(v_x, v_y)`.
    pub j_matrix: [[f64; 2]; 2],
    /// Components of `dz` against `(dx, dy)`.
    pub dz_frame: CVec2,
}

impl ComplexStructureData {
    /// Applies `j_matrix` to a complex vector.
    pub fn apply_j(&self, w: CVec2) -> CVec2 {
        let m = &self.j_matrix;
        [
            w[0] * m[0][0] + w[1] * m[0][1],
            w[0] * m[1][0] + w[1] * m[1][1],
        ]
    }
}

/// `ω(a, b) = 2π (a_x b_y − a_y b_x)`, extended complex-bilinearly.
pub fn omega(a: CVec2, b: CVec2) -> C64 {
    (a[0] * b[1] - a[1] * b[0]) * (2.0 * PI)
}

/// The complex structure with holomorphic coordinate `z = x + τy`.
///
/// `j` is fixed by `j ∂_z = i ∂_z`, which gives
/// `j = (1/v) [[−u, −|τ|²], [1, u]]` for `τ = u + iv`.
pub fn complex_structure(tau: TeichPoint) -> ComplexStructureData {
    let (u, v) = (tau.re(), tau.im());
    let n2 = tau.tau().norm_sqr();
    ComplexStructureData {
        tau,
        j_matrix: [[-u / v, -n2 / v], [1.0 / v, u / v]],
        dz_frame: [C64::new(1.0, 0.0), tau.tau()],
    }
}
