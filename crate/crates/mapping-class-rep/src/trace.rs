use crate::{
    default_path, fixed_point_set, quantum_operator, u_phase, FixedPointDatum, MappingClassLift,
    MappingError,
};
use geometry_core::{half_form_transport, TeichPoint, C64};
use hitchin_connection::Which;
use serde::{Deserialize, Serialize};
use torus_quantization::Level;

/// Numeric against predicted trace at one level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub k: usize,
    pub trace_numeric: C64,
    pub trace_predicted: C64,
    pub residual_times_k: f64,
}

impl TraceReport {
    pub fn new(k: usize, trace_numeric: C64, trace_predicted: C64) -> Self {
        let residual_times_k = k as f64 * (trace_numeric - trace_predicted).norm();
        Self {
            k,
            trace_numeric,
            trace_predicted,
            residual_times_k,
        }
    }
}

/// CSV with header `k,re_numeric,im_numeric,re_predicted,im_predicted,residual_times_k`.
pub fn reports_to_csv(reports: &[TraceReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "k",
        "re_numeric",
        "im_numeric",
        "re_predicted",
        "im_predicted",
        "residual_times_k",
    ])
    .expect("in-memory write");
    for r in reports {
        w.serialize((
            r.k,
            r.trace_numeric.re,
            r.trace_numeric.im,
            r.trace_predicted.re,
            r.trace_predicted.im,
            r.residual_times_k,
        ))
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

pub fn reports_to_json(reports: &[TraceReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

/// Local factors at a fixed point: with `e = ∂_z` at `τ`, `P = dz(Φe)` and
/// `Q = dz(Φē)`, the stationary phase determinant is `λ₊λ₋` with
/// `λ± = (1 − 1/P) ∓ i|Q|/P`. Returns `√λ₊ · √λ₋` (principal roots).
fn stationary_root(phi: [[i64; 2]; 2], tau: TeichPoint) -> C64 {
    let apply = |w: [C64; 2]| {
        [
            w[0] * phi[0][0] as f64 + w[1] * phi[0][1] as f64,
            w[0] * phi[1][0] as f64 + w[1] * phi[1][1] as f64,
        ]
    };
    let p = tau.dz(apply(tau.d_z()));
    let q = tau.dz(apply(tau.d_zbar())).norm();
    let i = C64::new(0.0, 1.0);
    let base = C64::new(1.0, 0.0) - p.inv();
    let lp = base - i * q / p;
    let lm = base + i * q / p;
    lp.sqrt() * lm.sqrt()
}

/// Fixed points of `Φ` with `u` from the lift's cocycle and `ζ` from the
/// lift's root of `cτ + d` and the half-form transport along `path`.
///
/// `ζ` is normalized so that the local trace term is
/// `ζ u^k / |det(I − L)|^{1/2}`; it plays the role of `i^m`.
pub fn fixed_points(
    h: &MappingClassLift,
    tau: TeichPoint,
    path: &[TeichPoint],
) -> Result<Vec<FixedPointDatum>, MappingError> {
    let (points, den) = fixed_point_set(&h.base)?;
    let phi = h.base.torus_map();
    let l_map = [
        [phi[0][0] as f64, phi[0][1] as f64],
        [phi[1][0] as f64, phi[1][1] as f64],
    ];
    let psi = half_form_transport(path)?;
    let zeta_raw = h.half_form_factor(tau) * psi.value;
    let abs_det = (h.base.fixed_determinant().abs() as f64).sqrt();
    let zeta = zeta_raw * abs_det / stationary_root(phi, tau);
    Ok(points
        .into_iter()
        .map(|x_num| {
            let (num, pden) = u_phase(h, x_num, den);
            FixedPointDatum {
                x_num,
                x_den: den,
                l_map,
                u: C64::from_polar(1.0, std::f64::consts::PI * num as f64 / pden as f64),
                u_phase_num: num,
                u_phase_den: pden,
                zeta,
            }
        })
        .collect())
}

/// `Σ_x ζ(x) u(x)^k / |det(I − L)|^{1/2}`.
pub fn trace_predict(
    h: &MappingClassLift,
    k: Level,
    tau: TeichPoint,
    path: &[TeichPoint],
) -> Result<C64, MappingError> {
    let data = fixed_points(h, tau, path)?;
    Ok(data
        .iter()
        .map(|d| d.zeta * d.u_pow(k.get()) / d.abs_det().sqrt())
        .sum())
}

/// Matrix trace of `U_k(h, p)` against the prediction for each level, along
/// the default geodesic.
pub fn trace_compare(
    h: &MappingClassLift,
    levels: &[usize],
    tau: TeichPoint,
    which: Which,
    ode_tolerance: f64,
) -> Result<Vec<TraceReport>, MappingError> {
    let path = default_path(h, tau);
    levels
        .iter()
        .map(|&k| {
            let level = Level::new(k as i64)?;
            let predicted = trace_predict(h, level, tau, &path)?;
            let u = quantum_operator(h, level, &path, which, ode_tolerance)?;
            Ok(TraceReport::new(k, u.trace(), predicted))
        })
        .collect()
}
