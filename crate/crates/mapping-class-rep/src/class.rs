use crate::MappingError;
use geometry_core::{TeichPoint, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `A = [[a, b], [c, d]] ∈ SL(2, Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MappingClass {
    a: [[i64; 2]; 2],
}

impl MappingClass {
    pub fn new(a: [[i64; 2]; 2]) -> Result<Self, MappingError> {
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det != 1 {
            return Err(MappingError::NotUnimodular(det));
        }
        Ok(Self { a })
    }

    pub fn identity() -> Self {
        Self {
            a: [[1, 0], [0, 1]],
        }
    }

    /// `S = [[0, −1], [1, 0]]`.
    pub fn s() -> Self {
        Self {
            a: [[0, -1], [1, 0]],
        }
    }

    /// `T = [[1, 1], [0, 1]]`.
    pub fn t() -> Self {
        Self {
            a: [[1, 1], [0, 1]],
        }
    }

    /// The cat map `[[2, 1], [1, 1]]`.
    pub fn cat() -> Self {
        Self {
            a: [[2, 1], [1, 1]],
        }
    }

    pub fn minus_identity() -> Self {
        Self {
            a: [[-1, 0], [0, -1]],
        }
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.a
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (p, q) = (self.a, other.a);
        let e = |i: usize, j: usize| p[i][0] * q[0][j] + p[i][1] * q[1][j];
        Self {
            a: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        }
    }

    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.a;
        Self {
            a: [[d, -b], [-c, a]],
        }
    }

    /// The torus map `Φ = [[a, −b], [−c, d]]` whose pushforward carries the
    /// complex structure `τ` to `A·τ` for `z = x + τy`.
    pub fn torus_map(&self) -> [[i64; 2]; 2] {
        let [[a, b], [c, d]] = self.a;
        [[a, -b], [-c, d]]
    }

    /// `Φ⁻¹ = [[d, b], [c, a]]`.
    pub fn torus_map_inverse(&self) -> [[i64; 2]; 2] {
        let [[a, b], [c, d]] = self.a;
        [[d, b], [c, a]]
    }

    /// `det(Φ − I) = 2 − tr A`.
    pub fn fixed_determinant(&self) -> i64 {
        2 - self.a[0][0] - self.a[1][1]
    }
}

/// Möbius action `τ ↦ (aτ + b)/(cτ + d)`.
pub fn act_on_tau(a: &MappingClass, tau: TeichPoint) -> TeichPoint {
    let [[a, b], [c, d]] = a.matrix();
    let t = tau.tau();
    let w = (t * a as f64 + b as f64) / (t * c as f64 + d as f64);
    TeichPoint::new(w).expect("SL(2,Z) preserves the upper half-plane")
}

/// A mapping class with a choice of square root of `cτ + d`.
///
/// On sections, `(h·s)(p) = ε √(cτ + d) · g_k(p) · s(Φ⁻¹p)` with the
/// quadratic cocycle `g_k(x, y) = exp(iπk(cd x² + ab y² + 2bc xy))`,
/// normalized to `g_k(0) = 1`. The root is the principal branch at the
/// source `τ` times `delta_sign`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingClassLift {
    pub base: MappingClass,
    pub delta_sign: i32,
}

impl MappingClassLift {
    pub fn new(base: MappingClass, delta_sign: i32) -> Result<Self, MappingError> {
        if delta_sign != 1 && delta_sign != -1 {
            return Err(MappingError::InvalidSign(delta_sign));
        }
        Ok(Self { base, delta_sign })
    }

    pub fn identity() -> Self {
        Self {
            base: MappingClass::identity(),
            delta_sign: 1,
        }
    }

    /// `ε √(cτ + d)`.
    pub fn half_form_factor(&self, tau: TeichPoint) -> C64 {
        let [[_, _], [c, d]] = self.base.matrix();
        (tau.tau() * c as f64 + d as f64).sqrt() * self.delta_sign as f64
    }

    /// The lift is defined at level `k` iff `k·cd` and `k·ab` are even.
    pub fn check_level(&self, k: usize) -> Result<(), MappingError> {
        let [[a, b], [c, d]] = self.base.matrix();
        let (kcd, kab) = (k as i64 * c * d, k as i64 * a * b);
        if kcd % 2 != 0 || kab % 2 != 0 {
            return Err(MappingError::ParityObstruction { k, kcd, kab });
        }
        Ok(())
    }

    /// `g_k(x, y)`.
    pub fn cocycle(&self, k: usize, x: f64, y: f64) -> C64 {
        let [[a, b], [c, d]] = self.base.matrix();
        let q = (c * d) as f64 * x * x + (a * b) as f64 * y * y + (2 * b * c) as f64 * x * y;
        C64::from_polar(1.0, PI * k as f64 * q)
    }

    /// Lift of `A₁A₂` whose root is continued from the two factors, so that
    /// `lift(h₁h₂)` and `lift(h₁)·lift(h₂)` use the same branch.
    pub fn compose(&self, other: &Self) -> Self {
        let tau = TeichPoint::i();
        let base = self.base.mul(&other.base);
        let mid = act_on_tau(&other.base, tau);
        let principal = |m: &MappingClass, t: TeichPoint| {
            Self {
                base: *m,
                delta_sign: 1,
            }
            .half_form_factor(t)
        };
        let ratio =
            principal(&self.base, mid) * principal(&other.base, tau) / principal(&base, tau);
        let sign = if ratio.re >= 0.0 { 1 } else { -1 };
        Self {
            base,
            delta_sign: sign * self.delta_sign * other.delta_sign,
        }
    }
}

/// A fixed point of `Φ` with its local trace data.
///
/// The point is `x = x_num / x_den` exactly. `u_phase` is `r` with
/// `u = e^{iπr}` as an exact fraction `u_phase_num / u_phase_den`, reduced
/// to `[0, 2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointDatum {
    pub x_num: [i64; 2],
    pub x_den: i64,
    pub l_map: [[f64; 2]; 2],
    pub u: C64,
    pub u_phase_num: i64,
    pub u_phase_den: i64,
    pub zeta: C64,
}

impl FixedPointDatum {
    pub fn x(&self) -> [f64; 2] {
        [
            self.x_num[0] as f64 / self.x_den as f64,
            self.x_num[1] as f64 / self.x_den as f64,
        ]
    }

    /// `u^k`, computed from the exact phase.
    pub fn u_pow(&self, k: usize) -> C64 {
        let m = 2 * self.u_phase_den as i128;
        let r = (self.u_phase_num as i128 * k as i128).rem_euclid(m);
        C64::from_polar(1.0, PI * r as f64 / self.u_phase_den as f64)
    }

    /// `|det(I − L)|`.
    pub fn abs_det(&self) -> f64 {
        let l = self.l_map;
        ((1.0 - l[0][0]) * (1.0 - l[1][1]) - l[0][1] * l[1][0]).abs()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// All `x ∈ [0,1)²` with `(Φ − I)x ∈ Z²`, as numerators over `|det(Φ − I)|`.
pub fn fixed_point_set(a: &MappingClass) -> Result<(Vec<[i64; 2]>, i64), MappingError> {
    let phi = a.torus_map();
    let m = [[phi[0][0] - 1, phi[0][1]], [phi[1][0], phi[1][1] - 1]];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det == 0 {
        return Err(MappingError::DegenerateClass);
    }
    let q = det.abs();
    let s = det.signum();
    // x = adj(M)·n / det.
    let adj = [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]];
    let mut out: Vec<[i64; 2]> = Vec::new();
    for n0 in 0..q {
        for n1 in 0..q {
            let p = [
                (s * (adj[0][0] * n0 + adj[0][1] * n1)).rem_euclid(q),
                (s * (adj[1][0] * n0 + adj[1][1] * n1)).rem_euclid(q),
            ];
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out.sort();
    Ok((out, q))
}

/// The exact phase `r` of `u = e^{iπr}` at a fixed point, as `(num, den)`
/// with `r ∈ [0, 2)`: the cocycle at `x` times the automorphy factor
/// relating `s(Φ⁻¹x)` to `s(x)`.
pub fn u_phase(lift: &MappingClassLift, x_num: [i64; 2], x_den: i64) -> (i64, i64) {
    let [[a, b], [c, d]] = lift.base.matrix();
    let ni = lift.base.torus_map_inverse();
    let (p, q) = (x_num[0], x_num[1]);
    // Φ⁻¹x − x = (n1, n2) ∈ Z².
    let n2 = (ni[1][0] * p + ni[1][1] * q - q) / x_den;
    let den2 = x_den * x_den;
    // r = cd x² + ab y² + 2bc xy − 2 n2 x over den².
    let num = c * d * p * p + a * b * q * q + 2 * b * c * p * q - 2 * n2 * p * x_den;
    let m = 2 * den2;
    let num = num.rem_euclid(m);
    let g = gcd(num, den2).max(1);
    (num / g, den2 / g)
}
