use crate::cache::frame;
use crate::config::{Experiment, ExperimentConfig};
use geometry_core::{concat, geodesic, straight, Path, TeichPoint, C64};
use hitchin_connection::{curvature_estimate, HitchinError, Which};
use mapping_class_rep::{
    act_on_tau, default_probe, fixed_points, kernel_concentration, multiplier_from,
    quantum_operator, trace_predict, unitarity_defect, Kernel, MappingClass, MappingClassLift,
    MappingError,
};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use std::collections::BTreeMap;
use toeplitz_calculus::{
    conjugation_defect, egorov_defect, tuynman_residual, tuynman_residual_second_order, Symbol,
    ToeplitzError, VectorField10,
};
use torus_quantization::linalg::{best_unit_scalar, op_norm, CMat};
use torus_quantization::{Level, QuantError};

/// One measured level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub k: usize,
    pub measured: f64,
    pub k_times_measured: f64,
    pub aux: BTreeMap<String, f64>,
}

/// Least-squares fit of `ln measured` against `ln k`, with the 95%
/// confidence half-width of the slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub half_width: f64,
    pub points: usize,
    pub excluded_k: Option<usize>,
}

/// Whether a failure means a violated hypothesis or a numerical problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureKind {
    Hypothesis,
    Numerical,
}

/// A failure with the `(k, τ)` context it occurred in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureReport {
    pub kind: FailureKind,
    pub message: String,
    pub k: usize,
    pub tau: [f64; 2],
}

/// Rows, slope and optional failure of one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub experiment: Experiment,
    pub tau: [f64; 2],
    pub mapping_class: Option<[[i64; 2]; 2]>,
    pub rows: Vec<Row>,
    pub slope: Option<SlopeFit>,
    pub error: Option<FailureReport>,
}

/// Minimum number of points for a slope fit.
pub const MIN_FIT_POINTS: usize = 4;

/// Fits the log-log slope over rows with positive finite measurements.
/// The smallest `k` is dropped as transient when at least
/// [`MIN_FIT_POINTS`] points remain without it.
pub fn fit_slope(rows: &[Row]) -> Option<SlopeFit> {
    let mut pts: Vec<(usize, f64)> = rows
        .iter()
        .filter(|r| r.measured.is_finite() && r.measured > 0.0)
        .map(|r| (r.k, r.measured))
        .collect();
    let mut excluded_k = None;
    if pts.len() > MIN_FIT_POINTS {
        excluded_k = Some(pts.remove(0).0);
    }
    if pts.len() < MIN_FIT_POINTS {
        return None;
    }
    let n = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - my - slope * (x - mx)).powi(2))
        .sum();
    let se = (sse / (n - 2.0) / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, n - 2.0)
        .expect("positive degrees of freedom")
        .inverse_cdf(0.975);
    Some(SlopeFit {
        slope,
        half_width: t * se,
        points: pts.len(),
        excluded_k,
    })
}

/// A failure before `(k, τ)` context is attached.
#[derive(Debug, Clone)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
}

impl From<MappingError> for Failure {
    fn from(e: MappingError) -> Self {
        let kind = match e {
            MappingError::DegenerateClass | MappingError::ParityObstruction { .. } => {
                FailureKind::Hypothesis
            }
            _ => FailureKind::Numerical,
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

macro_rules! numerical_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Self { kind: FailureKind::Numerical, message: e.to_string() }
            }
        }
    )*};
}
numerical_from!(
    HitchinError,
    QuantError,
    ToeplitzError,
    geometry_core::GeometryError
);

/// Five symbols moved by every hyperbolic class.
pub fn conjugation_test_symbols() -> Vec<Symbol> {
    vec![
        Symbol::cos(1, 0),
        Symbol::cos(0, 1),
        Symbol::cos(1, 1),
        Symbol::sin(1, -1),
        Symbol::cos(2, 1),
    ]
}

/// The ten Fourier-mode fields of the Tuynman sweep.
pub fn tuynman_fields() -> Vec<VectorField10> {
    [
        (0, 0),
        (1, 0),
        (0, 1),
        (1, 1),
        (-1, 0),
        (0, -1),
        (2, 1),
        (-1, 2),
        (1, -1),
        (2, 0),
    ]
    .into_iter()
    .map(|(m, n)| VectorField10 {
        g: Symbol::mode(m, n, C64::new(1.0, 0.0)),
    })
    .collect()
}

/// Source point of the kernel sweep.
pub const KERNEL_SOURCE: [f64; 2] = [0.2, 0.7];

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    lift: Option<MappingClassLift>,
}

impl Ctx<'_> {
    fn lift(&self) -> MappingClassLift {
        self.lift.expect("validated config carries a mapping class")
    }

    fn geodesic_path(&self, h: &MappingClassLift) -> Path {
        let tau = self.cfg.tau;
        geodesic(act_on_tau(&h.base, tau), tau, self.cfg.path_samples)
    }

    /// `A·τ → via₁ → via₂ → τ`, a detour homotopic to the geodesic.
    fn detour_path(&self, h: &MappingClassLift) -> Result<Path, Failure> {
        let tau = self.cfg.tau;
        let start = act_on_tau(&h.base, tau);
        let mid = (start.tau() + tau.tau()) * 0.5;
        let v = tau.im();
        let via1 = TeichPoint::new(mid + C64::new(0.3, 0.4) * v)?;
        let via2 = TeichPoint::new(mid + C64::new(-0.3, 0.4) * v)?;
        let n = (self.cfg.path_samples / 3).max(2);
        Ok(concat(
            &concat(&straight(start, via1, n), &straight(via1, via2, n)),
            &straight(via2, tau, n),
        ))
    }

    fn operator(
        &self,
        h: &MappingClassLift,
        k: Level,
        path: &[TeichPoint],
    ) -> Result<CMat, Failure> {
        Ok(quantum_operator(
            h,
            k,
            path,
            Which::Hitchin,
            self.cfg.tolerance("ode"),
        )?)
    }

    fn point(&self, k: usize) -> Result<(f64, BTreeMap<String, f64>), Failure> {
        let cfg = self.cfg;
        let level = Level::new(k as i64)?;
        let tau = cfg.tau;
        let mut aux = BTreeMap::new();
        let measured = match cfg.experiment {
            Experiment::Curvature => {
                let side = cfg.tolerance("side");
                let s = curvature_estimate(level, tau, side, Which::Hitchin, cfg.tolerance("ode"))?;
                let mut d = s.r.clone();
                let tr = s.r.trace() / k as f64;
                for i in 0..k {
                    d[(i, i)] -= tr;
                }
                aux.insert("projective_defect".into(), op_norm(&d));
                aux.insert("side".into(), side);
                op_norm(&s.r)
            }
            Experiment::Transport => {
                let h = self.lift();
                let u1 = self.operator(&h, level, &self.geodesic_path(&h))?;
                let u2 = self.operator(&h, level, &self.detour_path(&h)?)?;
                let (lambda, res) = best_unit_scalar(&u1, &u2);
                aux.insert("residual".into(), res);
                (lambda - 1.0).norm()
            }
            Experiment::Unitarity => {
                let h = self.lift();
                let u = self.operator(&h, level, &self.geodesic_path(&h))?;
                let f = frame(level, tau, cfg.tolerance("frame"))?;
                aux.insert("trace_abs".into(), u.trace().norm());
                unitarity_defect(&u, &f)
            }
            Experiment::Multipliers => {
                let h = self.lift();
                let hh = h.compose(&h);
                let u = self.operator(&h, level, &self.geodesic_path(&h))?;
                let uu = self.operator(&hh, level, &self.geodesic_path(&hh))?;
                let m = multiplier_from(&(&u * &u), &uu)?;
                aux.insert("residual".into(), m.residual);
                m.defect
            }
            Experiment::Egorov => {
                let h = self.lift();
                let u = self.operator(&h, level, &self.geodesic_path(&h))?;
                let f = frame(level, tau, cfg.tolerance("frame"))?;
                let phi = h.base.torus_map();
                let mut conj = 0.0f64;
                for sym in conjugation_test_symbols() {
                    conj = conj.max(conjugation_defect(&f, &u, &sym)?);
                }
                aux.insert("conjugation_max".into(), conj);
                egorov_defect(&f, &u, &phi, &Symbol::cos(1, 0))?
            }
            Experiment::Trace => {
                let h = self.lift();
                let path = self.geodesic_path(&h);
                let predicted = trace_predict(&h, level, tau, &path)?;
                let numeric = self.operator(&h, level, &path)?.trace();
                aux.insert("re_numeric".into(), numeric.re);
                aux.insert("im_numeric".into(), numeric.im);
                aux.insert("re_predicted".into(), predicted.re);
                aux.insert("im_predicted".into(), predicted.im);
                aux.insert(
                    "residual_times_k".into(),
                    k as f64 * (numeric - predicted).norm(),
                );
                (numeric - predicted).norm()
            }
            Experiment::Kernel => {
                let h = self.lift();
                let path = self.geodesic_path(&h);
                let u = self.operator(&h, level, &path)?;
                let f = frame(level, tau, cfg.tolerance("frame"))?;
                let phi = h.base.torus_map();
                let probe = default_probe(k);
                let r = kernel_concentration(&u, &f, &phi, KERNEL_SOURCE, probe)?;
                aux.insert("probe_spacing".into(), 1.0 / probe as f64);
                aux.insert("peak_distance".into(), r.peak_distance);
                aux.insert("peak_magnitude".into(), r.peak_magnitude);
                aux.insert("magnitude_ratio".into(), r.magnitude_ratio);
                aux.insert("off_graph_ratio".into(), r.off_graph_ratio);
                aux.insert("width_ratio".into(), r.width_ratio);
                if let Ok(data) = fixed_points(&h, tau, &path) {
                    let d = &data[0];
                    let kx = Kernel::new(&u, &f)?.eval(d.x(), d.x());
                    aux.insert(
                        "fixed_point_phase".into(),
                        (kx / (d.u_pow(k) * d.zeta)).arg(),
                    );
                }
                r.width
            }
            Experiment::Tuynman => {
                let f = frame(level, tau, cfg.tolerance("frame"))?;
                let fields = tuynman_fields();
                let mut worst = 0.0f64;
                for x in &fields {
                    worst = worst.max(tuynman_residual(&f, x)?.1);
                }
                let mut second = 0.0f64;
                for x1 in &fields[1..4] {
                    for x2 in &fields[1..4] {
                        second = second.max(tuynman_residual_second_order(&f, x1, x2)?.1);
                    }
                }
                aux.insert("second_order_max".into(), second);
                worst
            }
        };
        Ok((measured, aux))
    }
}

/// Runs the sweep in memory. On failure the report carries the rows
/// measured so far and the failure with its `(k, τ)` context.
pub fn measure(cfg: &ExperimentConfig) -> SweepReport {
    let ctx = Ctx {
        cfg,
        lift: cfg.mapping_class.map(|m: MappingClass| MappingClassLift {
            base: m,
            delta_sign: 1,
        }),
    };
    let mut report = SweepReport {
        experiment: cfg.experiment,
        tau: [cfg.tau.re(), cfg.tau.im()],
        mapping_class: cfg.mapping_class.map(|m| m.matrix()),
        rows: Vec::new(),
        slope: None,
        error: None,
    };
    for &k in &cfg.k_list {
        match ctx.point(k) {
            Ok((measured, aux)) => report.rows.push(Row {
                k,
                measured,
                k_times_measured: k as f64 * measured,
                aux,
            }),
            Err(f) => {
                report.error = Some(FailureReport {
                    kind: f.kind,
                    message: f.message,
                    k,
                    tau: report.tau,
                });
                break;
            }
        }
    }
    report.slope = fit_slope(&report.rows);
    report
}
