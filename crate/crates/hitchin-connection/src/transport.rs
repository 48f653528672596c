use crate::forms::{Connection, Which};
use crate::ode::dopri5;
use crate::HitchinError;
use geometry_core::{TangentU, TeichPoint, C64};
use std::collections::hash_map::Entry;
use std::collections::HashMap;
use torus_quantization::linalg::{op_norm, to_rows, CMat};
use torus_quantization::Level;

/// Frame-to-frame transport `U` along a sampled path.
#[derive(Debug, Clone)]
pub struct TransportResult {
    pub u: CMat,
    pub path: Vec<TeichPoint>,
    pub ode_tolerance: f64,
}

/// Holonomy-derived curvature on the `(∂_{Re τ}, ∂_{Im τ})` plane.
#[derive(Debug, Clone)]
pub struct CurvatureSample {
    pub tau: TeichPoint,
    pub side: f64,
    pub r: CMat,
}

impl TransportResult {
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "u": to_rows(&self.u),
            "path": self.path.iter().map(|p| [p.re(), p.im()]).collect::<Vec<_>>(),
            "ode_tolerance": self.ode_tolerance,
        })
        .to_string()
    }
}

impl CurvatureSample {
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "tau": [self.tau.re(), self.tau.im()],
            "side": self.side,
            "r": to_rows(&self.r),
        })
        .to_string()
    }
}

fn check_tol(tol: f64) -> Result<(), HitchinError> {
    if !(1e-12..=1e-6).contains(&tol) {
        return Err(HitchinError::InvalidTolerance(tol));
    }
    Ok(())
}

/// Transport of `conn` along the piecewise-linear path through `path`.
///
/// Each segment `τ_i → τ_{i+1}` is integrated on `s ∈ [0, 1]` with
/// `X = τ_{i+1} − τ_i`. Form evaluations are cached per node of the
/// integrator, so the first-same-as-last stage is not recomputed.
pub fn transport_with(
    conn: &dyn Connection,
    path: &[TeichPoint],
    ode_tolerance: f64,
) -> Result<TransportResult, HitchinError> {
    check_tol(ode_tolerance)?;
    let n = conn.dim();
    let mut u = CMat::identity(n, n);
    for w in path.windows(2) {
        let (a, d) = (w[0].tau(), w[1].tau() - w[0].tau());
        if d.norm() == 0.0 {
            continue;
        }
        let x = TangentU::new(d);
        let mut cache: HashMap<u64, CMat> = HashMap::new();
        let mut rhs = |s: f64, y: &CMat| -> Result<CMat, HitchinError> {
            let key = s.to_bits();
            let form = match cache.entry(key) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => e.insert(conn.form(TeichPoint::new(a + d * s)?, x)?),
            };
            Ok(-(&*form * y))
        };
        u = dopri5(&mut rhs, u, 0.0, 1.0, ode_tolerance, 1.0)?.0;
    }
    Ok(TransportResult {
        u,
        path: path.to_vec(),
        ode_tolerance,
    })
}

/// Transport of the Hitchin or Toeplitz connection at level `k`, frames at
/// tolerance `1e−12`.
pub fn parallel_transport(
    k: Level,
    path: &[TeichPoint],
    which: Which,
    ode_tolerance: f64,
) -> Result<TransportResult, HitchinError> {
    transport_with(which.at_level(k, 1e-12).as_ref(), path, ode_tolerance)
}

fn point(t: C64) -> Result<TeichPoint, HitchinError> {
    Ok(TeichPoint::new(t)?)
}

/// Holonomy based at `tau` around the counterclockwise square of the given
/// side centred at `tau`: transport to the lower-left corner, around, and
/// back.
pub fn holonomy(
    conn: &dyn Connection,
    tau: TeichPoint,
    side: f64,
    ode_tolerance: f64,
) -> Result<CMat, HitchinError> {
    let c = tau.tau();
    let h = side / 2.0;
    let corner = point(c + C64::new(-h, -h))?;
    let loop_path = [
        corner,
        point(c + C64::new(h, -h))?,
        point(c + C64::new(h, h))?,
        point(c + C64::new(-h, h))?,
        corner,
    ];
    let to_corner = transport_with(conn, &[tau, corner], ode_tolerance)?.u;
    let around = transport_with(conn, &loop_path, ode_tolerance)?.u;
    let back = transport_with(conn, &[corner, tau], ode_tolerance)?.u;
    Ok(back * around * to_corner)
}

/// `R = (I − hol)/side²`, Richardson-extrapolated over `side` and `side/2`.
///
/// With transport `U' = −A U` the counterclockwise holonomy is
/// `I − side²·(dA + [A, A]) + O(side³)`, so a constant form yields the
/// commutator `[A(∂_{Re τ}), A(∂_{Im τ})]`.
pub fn curvature_with(
    conn: &dyn Connection,
    tau: TeichPoint,
    side: f64,
    ode_tolerance: f64,
) -> Result<CurvatureSample, HitchinError> {
    let n = conn.dim();
    let id = CMat::identity(n, n);
    let estimate = |s: f64| -> Result<CMat, HitchinError> {
        let hol = holonomy(conn, tau, s, ode_tolerance)?;
        let defect = op_norm(&(&hol - &id));
        if defect > 0.5 {
            return Err(HitchinError::LoopTooLarge(defect));
        }
        Ok((&id - hol) * C64::new(1.0 / (s * s), 0.0))
    };
    let coarse = estimate(side)?;
    let fine = estimate(side / 2.0)?;
    let r = (fine * C64::new(4.0, 0.0) - coarse) * C64::new(1.0 / 3.0, 0.0);
    Ok(CurvatureSample { tau, side, r })
}

/// [`curvature_with`] for the Hitchin or Toeplitz connection at level `k`.
pub fn curvature_estimate(
    k: Level,
    tau: TeichPoint,
    side: f64,
    which: Which,
    ode_tolerance: f64,
) -> Result<CurvatureSample, HitchinError> {
    curvature_with(which.at_level(k, 1e-12).as_ref(), tau, side, ode_tolerance)
}
