use crate::HitchinError;
use geometry_core::C64;
use torus_quantization::linalg::CMat;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights minus the embedded fourth-order weights.
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

/// Step counts of one integration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Integrates `Y' = f(s, Y)` from `s0` to `s1` with the Dormand–Prince 5(4)
/// pair, mixed absolute/relative tolerance `tol` and at most `max_step`.
///
/// Errors with `OdeNonconvergence` when the step falls below `1e−12` of the
/// interval.
pub fn dopri5(
    mut f: impl FnMut(f64, &CMat) -> Result<CMat, HitchinError>,
    y0: CMat,
    s0: f64,
    s1: f64,
    tol: f64,
    max_step: f64,
) -> Result<(CMat, OdeStats), HitchinError> {
    let span = s1 - s0;
    let mut stats = OdeStats::default();
    if span == 0.0 {
        return Ok((y0, stats));
    }
    let mut s = s0;
    let mut y = y0;
    let mut h = max_step.min(span.abs()).copysign(span);
    let mut k1 = f(s, &y)?;
    while (s1 - s) * span.signum() > 0.0 {
        if (s + h - s1) * span.signum() > 0.0 {
            h = s1 - s;
        }
        let mut ks: Vec<CMat> = Vec::with_capacity(7);
        ks.push(k1.clone());
        for i in 1..7 {
            let mut yi = y.clone();
            for (j, kj) in ks.iter().enumerate() {
                if A[i][j] != 0.0 {
                    yi += kj * C64::new(h * A[i][j], 0.0);
                }
            }
            ks.push(f(s + C[i] * h, &yi)?);
        }
        // Row 6 of A holds the fifth-order weights, so stage 7 was evaluated
        // at the new solution.
        let mut y_new = y.clone();
        let mut err = CMat::zeros(y.nrows(), y.ncols());
        for (j, kj) in ks.iter().enumerate() {
            if j < 6 && A[6][j] != 0.0 {
                y_new += kj * C64::new(h * A[6][j], 0.0);
            }
            if E[j] != 0.0 {
                err += kj * C64::new(h * E[j], 0.0);
            }
        }
        let mut ratio = 0.0f64;
        for (e, (a, b)) in err.iter().zip(y.iter().zip(y_new.iter())) {
            let scale = tol + tol * a.norm().max(b.norm());
            ratio = ratio.max(e.norm() / scale);
        }
        let factor = if ratio == 0.0 {
            5.0
        } else {
            (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
        };
        if ratio <= 1.0 {
            s += h;
            y = y_new;
            k1 = ks.pop().expect("seven stages");
            stats.accepted += 1;
            h = (h * factor).abs().min(max_step).copysign(span);
        } else {
            stats.rejected += 1;
            h *= factor;
            if h.abs() < 1e-12 * span.abs() {
                return Err(HitchinError::OdeNonconvergence(s));
            }
        }
    }
    Ok((y, stats))
}
