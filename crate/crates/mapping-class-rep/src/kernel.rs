use crate::MappingError;
use geometry_core::C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use torus_quantization::linalg::{CMat, CVec};
use torus_quantization::QuantumFrame;

/// Probe grid size resolving the kernel width `1/√(πk)`.
pub fn default_probe(k: usize) -> usize {
    64usize.max((4.0 * (PI * k as f64).sqrt()).ceil() as usize)
}

/// Concentration of the Schwartz kernel `K(x, y₀)` of `U` around the graph
/// point `x = Φy₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelReport {
    pub k: usize,
    pub probe: usize,
    /// Torus distance from the grid maximum of `|K(·, y₀)|` to `Φy₀`.
    pub peak_distance: f64,
    /// `|K(Φy₀, y₀)|`.
    pub peak_magnitude: f64,
    /// `|K(Φy₀, y₀)| / (k/2π)`.
    pub magnitude_ratio: f64,
    /// Width from the Gaussian area, `√(∫|K| / (2π |K|_max))`.
    pub width: f64,
    /// `width · √(πk)`; 1 for the isotropic Bergman profile.
    pub width_ratio: f64,
    /// Largest `|K(Φy₀ + 3k^{−1/2} e, y₀)| / |K(Φy₀, y₀)|` over eight
    /// directions `e`.
    pub off_graph_ratio: f64,
    /// `K(Φy₀, y₀)`.
    pub on_graph_value: C64,
}

fn torus_distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = |s: f64, t: f64| {
        let r = (s - t).rem_euclid(1.0);
        r.min(1.0 - r)
    };
    d(a[0], b[0]).hypot(d(a[1], b[1]))
}

/// `K(x, y) = Σ U_ij θ_i(x) (gram⁻¹ θ̄(y))_j` at arbitrary points.
pub struct Kernel<'a> {
    frame: &'a QuantumFrame,
    u: &'a CMat,
}

impl<'a> Kernel<'a> {
    pub fn new(u: &'a CMat, frame: &'a QuantumFrame) -> Result<Self, MappingError> {
        if u.shape() != (frame.k(), frame.k()) {
            return Err(MappingError::ShapeMismatch(format!(
                "U is {:?}, k = {}",
                u.shape(),
                frame.k()
            )));
        }
        Ok(Self { frame, u })
    }

    /// Coefficients `w` with `K(x, y) = Σ_i w_i θ_i(x)`.
    pub fn column(&self, y: [f64; 2]) -> CVec {
        let k = self.frame.k();
        let conj = CVec::from_fn(k, |l, _| self.frame.evaluate_basis(l, y[0], y[1]).conj());
        self.u * (self.frame.gram_inv() * conj)
    }

    pub fn eval_with(&self, w: &CVec, x: [f64; 2]) -> C64 {
        (0..self.frame.k())
            .map(|i| w[i] * self.frame.evaluate_basis(i, x[0], x[1]))
            .sum()
    }

    pub fn eval(&self, x: [f64; 2], y: [f64; 2]) -> C64 {
        self.eval_with(&self.column(y), x)
    }
}

/// Measures the kernel of `U` on a `probe × probe` grid of `x` for the
/// fixed source point `y0`, against the graph of the torus map `phi`.
pub fn kernel_concentration(
    u: &CMat,
    frame: &QuantumFrame,
    phi: &[[i64; 2]; 2],
    y0: [f64; 2],
    probe: usize,
) -> Result<KernelReport, MappingError> {
    let k = frame.k();
    let kernel = Kernel::new(u, frame)?;
    let w = kernel.column(y0);
    let graph = [
        (phi[0][0] as f64 * y0[0] + phi[0][1] as f64 * y0[1]).rem_euclid(1.0),
        (phi[1][0] as f64 * y0[0] + phi[1][1] as f64 * y0[1]).rem_euclid(1.0),
    ];
    let h = 1.0 / probe as f64;
    let (mut best, mut best_at, mut area) = (0.0f64, [0.0; 2], 0.0);
    for b in 0..probe {
        for a in 0..probe {
            // Centre the probe grid on the graph point so that it is sampled.
            let x = [graph[0] + a as f64 * h, graph[1] + b as f64 * h];
            let m = kernel.eval_with(&w, x).norm();
            area += m * h * h;
            if m > best {
                best = m;
                best_at = x;
            }
        }
    }
    let on_graph_value = kernel.eval_with(&w, graph);
    let peak_magnitude = on_graph_value.norm();
    let width = (area / (2.0 * PI * best.max(f64::MIN_POSITIVE))).sqrt();
    if h > width {
        return Err(MappingError::UnresolvedPeak { spacing: h, width });
    }
    let r = 3.0 / (k as f64).sqrt();
    let off_graph = (0..8)
        .map(|i| {
            let a = PI * i as f64 / 4.0;
            let x = [graph[0] + r * a.cos(), graph[1] + r * a.sin()];
            kernel.eval_with(&w, x).norm()
        })
        .fold(0.0, f64::max);
    Ok(KernelReport {
        k,
        probe,
        peak_distance: torus_distance(best_at, graph),
        peak_magnitude,
        magnitude_ratio: peak_magnitude / (k as f64 / (2.0 * PI)),
        width,
        width_ratio: width * (PI * k as f64).sqrt(),
        off_graph_ratio: off_graph / peak_magnitude.max(f64::MIN_POSITIVE),
        on_graph_value,
    })
}
