use crate::structure::TeichPoint;
use crate::{GeometryError, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// Refinement depth allowed when tracking a square root along a path.
pub const MAX_REFINE_DEPTH: usize = 20;

/// `Ψ(q_start) = value · q_end` for the half-form isomorphism along a path,
/// together with `square`, the canonical-bundle ratio `value²`.
///
/// `square` is `pi_projection(end, start)`, which is not unimodular away
/// from the constant path; [`HalfFormPhase::phase`] gives the unit phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfFormPhase {
    pub value: C64,
    pub square: C64,
}

impl HalfFormPhase {
    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        Self {
            value: one,
            square: one,
        }
    }

    /// `value / |value|`.
    pub fn phase(&self) -> C64 {
        self.value / self.value.norm()
    }
}

/// Scalar `α` with `π(∂_{z_from}) = α ∂_{z_to}`, where `π` projects onto
/// `E_to` along `Ē_from`.
///
/// Solves `α ∂_{z_to} − β ∂_{z̄_from} = ∂_{z_from}` by Cramer's rule.
pub fn pi_projection(tau_from: TeichPoint, tau_to: TeichPoint) -> C64 {
    let e_to = tau_to.d_z();
    let eb_from = tau_from.d_zbar();
    let rhs = tau_from.d_z();
    let det = e_to[0] * (-eb_from[1]) - (-eb_from[0]) * e_to[1];
    (rhs[0] * (-eb_from[1]) - (-eb_from[0]) * rhs[1]) / det
}

fn nearest_root(square: C64, previous: C64) -> C64 {
    let r = square.sqrt();
    if (r - previous).norm() <= (r + previous).norm() {
        r
    } else {
        -r
    }
}

fn track(
    start: TeichPoint,
    a: C64,
    b: C64,
    sq_a: C64,
    val_a: C64,
    depth: usize,
) -> Result<(C64, C64), GeometryError> {
    let pb = TeichPoint::new(b)?;
    let sq_b = pi_projection(pb, start);
    if (sq_b / sq_a).arg().abs() <= FRAC_PI_2 {
        return Ok((sq_b, nearest_root(sq_b, val_a)));
    }
    if depth >= MAX_REFINE_DEPTH {
        return Err(GeometryError::SamplingTooCoarse(depth));
    }
    let mid = (a + b) / 2.0;
    let (sq_m, val_m) = track(start, a, mid, sq_a, val_a, depth + 1)?;
    track(start, mid, b, sq_m, val_m, depth + 1)
}

/// Continuous square root of the projection ratio along a sampled path,
/// starting from the identity.
///
/// Segments whose squared phase jumps by more than `π/2` are bisected, up
/// to [`MAX_REFINE_DEPTH`] times.
pub fn half_form_transport(path: &[TeichPoint]) -> Result<HalfFormPhase, GeometryError> {
    let Some(&start) = path.first() else {
        return Ok(HalfFormPhase::identity());
    };
    let one = C64::new(1.0, 0.0);
    let (mut sq, mut val) = (one, one);
    for w in path.windows(2) {
        (sq, val) = track(start, w[0].tau(), w[1].tau(), sq, val, 0)?;
    }
    Ok(HalfFormPhase {
        value: val,
        square: sq,
    })
}
