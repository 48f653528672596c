use crate::{act_on_tau, MappingClassLift, MappingError};
use geometry_core::{geodesic, Path, TeichPoint, C64};
use hitchin_connection::{parallel_transport, Which};
use serde::{Deserialize, Serialize};
use torus_quantization::linalg::{best_unit_scalar, gram_adjoint_between, gram_norm_between, CMat};
use torus_quantization::{build_frame, Level, QuantumFrame};

/// Tolerance of the lift holomorphicity check.
pub const LIFT_TOLERANCE: f64 = 1e-8;
/// Samples of the default geodesic from `A·τ` to `τ`.
pub const DEFAULT_PATH_SAMPLES: usize = 64;
/// Tolerance at which frames for lifts and operators are built.
const FRAME_TOL: f64 = 1e-12;
/// Post-alignment residual above which two operators are not proportional.
const PROPORTIONALITY_LIMIT: f64 = 0.5;

/// The hyperbolic geodesic from `A·τ` to `τ`.
pub fn default_path(h: &MappingClassLift, tau: TeichPoint) -> Path {
    geodesic(act_on_tau(&h.base, tau), tau, DEFAULT_PATH_SAMPLES)
}

/// Matrix of the lifted pullback `H_{k,τ} → H_{k,A·τ}` in the theta frames.
///
/// Each `θ_j ⊗ q_τ` is mapped to `ε √(cτ+d) g_k(p) θ_j(Φ⁻¹p) ⊗ q_{A·τ}`,
/// sampled on the target grid and projected.
pub fn lift_pullback(
    h: &MappingClassLift,
    target: &QuantumFrame,
    source: &QuantumFrame,
) -> Result<CMat, MappingError> {
    let k = source.k();
    if target.k() != k {
        return Err(MappingError::ShapeMismatch(format!(
            "levels {} and {}",
            target.k(),
            k
        )));
    }
    let expected = act_on_tau(&h.base, source.tau());
    if (expected.tau() - target.tau().tau()).norm() > 1e-10 * (1.0 + expected.tau().norm()) {
        return Err(MappingError::PathMismatch(format!(
            "target frame at {}, expected A·τ = {}",
            target.tau().tau(),
            expected.tau()
        )));
    }
    h.check_level(k)?;
    let n = target.n_g();
    let ni = h.base.torus_map_inverse();
    let scale = h.half_form_factor(source.tau()) * target.tau().half_form_weight()
        / source.tau().half_form_weight();
    let mut cocycle = Vec::with_capacity(n * n);
    let mut pre = Vec::with_capacity(n * n);
    for b in 0..n {
        for a in 0..n {
            let (x, y) = (a as f64 / n as f64, b as f64 / n as f64);
            cocycle.push(h.cocycle(k, x, y) * scale);
            pre.push((
                ni[0][0] as f64 * x + ni[0][1] as f64 * y,
                ni[1][0] as f64 * x + ni[1][1] as f64 * y,
            ));
        }
    }
    let mut out = CMat::zeros(k, k);
    let mut worst = 0.0f64;
    for j in 0..k {
        let samples: Vec<C64> = pre
            .iter()
            .zip(&cocycle)
            .map(|(&(x, y), &g)| g * source.evaluate_basis(j, x, y))
            .collect();
        let (coeffs, res) = target.bergman_project_samples(&samples)?;
        worst = worst.max(res);
        out.set_column(j, &coeffs.0);
    }
    if worst > LIFT_TOLERANCE {
        return Err(MappingError::LiftInconsistency(worst));
    }
    Ok(out)
}

/// `U_k(h, p) = T(p) · lift(h)` on `H_{k,τ}`, for a path `p` from `A·τ` to
/// `τ`.
pub fn quantum_operator(
    h: &MappingClassLift,
    k: Level,
    path: &[TeichPoint],
    which: Which,
    ode_tolerance: f64,
) -> Result<CMat, MappingError> {
    let (Some(&first), Some(&tau)) = (path.first(), path.last()) else {
        return Err(MappingError::PathMismatch("empty path".into()));
    };
    let start = act_on_tau(&h.base, tau);
    if (start.tau() - first.tau()).norm() > 1e-10 * (1.0 + start.tau().norm()) {
        return Err(MappingError::PathMismatch(format!(
            "path starts at {}, expected A·τ = {}",
            first.tau(),
            start.tau()
        )));
    }
    let source = build_frame(k, tau, FRAME_TOL)?;
    let target = build_frame(k, start, FRAME_TOL)?;
    let lift = lift_pullback(h, &target, &source)?;
    let transport = parallel_transport(k, path, which, ode_tolerance)?;
    Ok(transport.u * lift)
}

/// `‖U U* − I‖` in the gram-weighted norm, with `U*` the gram adjoint.
pub fn unitarity_defect(u: &CMat, frame: &QuantumFrame) -> f64 {
    let g = frame.gram();
    let adj = gram_adjoint_between(u, g, g);
    let k = u.nrows();
    gram_norm_between(
        &(u * adj - CMat::identity(k, k)),
        frame.chol_l(),
        frame.chol_l(),
    )
}

/// Best unit scalar `μ` with `U₁U₂ ≈ μ U₁₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiplierReport {
    pub mu: C64,
    /// `|μ − 1|`.
    pub defect: f64,
    /// Relative Frobenius residual after alignment.
    pub residual: f64,
}

/// Aligns `product` with `target` by a unit scalar.
pub fn multiplier_from(product: &CMat, target: &CMat) -> Result<MultiplierReport, MappingError> {
    let (mu, residual) = best_unit_scalar(product, target);
    if residual > PROPORTIONALITY_LIMIT {
        return Err(MappingError::NotProjectivelyProportional(residual));
    }
    Ok(MultiplierReport {
        mu,
        defect: (mu - 1.0).norm(),
        residual,
    })
}

/// `|μ_k − 1|` for `U_k(h₁)U_k(h₂) = μ_k U_k(h₁h₂)`, all operators on
/// `H_{k,τ}` along default geodesics.
pub fn multiplier_defect(
    h1: &MappingClassLift,
    h2: &MappingClassLift,
    k: Level,
    tau: TeichPoint,
    which: Which,
    ode_tolerance: f64,
) -> Result<MultiplierReport, MappingError> {
    let u =
        |h: &MappingClassLift| quantum_operator(h, k, &default_path(h, tau), which, ode_tolerance);
    let h12 = h1.compose(h2);
    multiplier_from(&(u(h1)? * u(h2)?), &u(&h12)?)
}
