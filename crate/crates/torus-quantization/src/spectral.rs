use geometry_core::{TeichPoint, C64};
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// A field on the `N×N` grid stored as `F̂(f, b)` with
/// `F(a/N, b/N) = Σ_f F̂(f, b) e^{2πi f a/N}`, row-major in `b`.
///
/// The grid Liouville product is `⟨F, G⟩ = (2π/N) Σ conj(F̂) Ĝ`, which is
/// exactly the trapezoid rule for `∫ F̄ G · 2π dx dy`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub n: usize,
    pub data: Vec<C64>,
}

impl SpectralField {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    /// Transforms grid samples `samples[b·N + a] = F(a/N, b/N)`.
    pub fn from_samples(n: usize, samples: &[C64]) -> Self {
        assert_eq!(samples.len(), n * n, "sample count must be N²");
        let fft = FftPlanner::new().plan_fft_forward(n);
        let mut data = samples.to_vec();
        fft.process(&mut data);
        let scale = 1.0 / n as f64;
        data.iter_mut().for_each(|z| *z *= scale);
        Self { n, data }
    }

    /// Inverse of [`SpectralField::from_samples`].
    pub fn to_samples(&self) -> Vec<C64> {
        let fft = FftPlanner::new().plan_fft_inverse(self.n);
        let mut data = self.data.clone();
        fft.process(&mut data);
        data
    }

    /// Grid Liouville product, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        let s: C64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum();
        s * (2.0 * PI / self.n as f64)
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }

    /// Multiplication by `e^{2πi(μx + νy)}`, exact on the grid.
    pub fn mul_mode(&self, mu: i64, nu: i64) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for b in 0..n {
            let ph = C64::from_polar(1.0, 2.0 * PI * nu as f64 * b as f64 / n as f64);
            for f in 0..n {
                let g = (f as i64 + mu).rem_euclid(n as i64) as usize;
                out.data[b * n + g] = self.data[b * n + f] * ph;
            }
        }
        out
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Self, c: C64) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * c;
        }
    }
}

fn signed_freq(f: usize, n: usize) -> f64 {
    if 2 * f < n {
        f as f64
    } else if 2 * f > n {
        f as f64 - n as f64
    } else {
        0.0
    }
}

fn derivative_1d(line: &mut [C64], planner: &mut FftPlanner<f64>) {
    let n = line.len();
    planner.plan_fft_forward(n).process(line);
    for (f, z) in line.iter_mut().enumerate() {
        *z *= C64::new(0.0, 2.0 * PI * signed_freq(f, n)) / n as f64;
    }
    planner.plan_fft_inverse(n).process(line);
}

/// `∂_x` of a level-`k` section sampled on the grid.
///
/// Each row is demodulated by `e^{2πi s x}` with `s = round(k y)`, which
/// moves its band to the origin before spectral differentiation.
pub fn partial_x_samples(n: usize, k: usize, samples: &[C64]) -> Vec<C64> {
    let mut planner = FftPlanner::new();
    let mut out = vec![C64::new(0.0, 0.0); n * n];
    for b in 0..n {
        let s = (k as f64 * b as f64 / n as f64).round();
        let mut row: Vec<C64> = (0..n)
            .map(|a| samples[b * n + a] * C64::from_polar(1.0, 2.0 * PI * s * a as f64 / n as f64))
            .collect();
        derivative_1d(&mut row, &mut planner);
        for a in 0..n {
            let back = C64::from_polar(1.0, -2.0 * PI * s * a as f64 / n as f64);
            out[b * n + a] = row[a] * back - C64::new(0.0, 2.0 * PI * s) * samples[b * n + a];
        }
    }
    out
}

/// `∂_y` of a level-`k` section sampled on the grid.
///
/// Each column is twisted by `e^{2πiεy}` with `ε = kx − round(kx)`, which
/// makes it periodic in `y` under the automorphy `e^{−2πikx}`.
pub fn partial_y_samples(n: usize, k: usize, samples: &[C64]) -> Vec<C64> {
    let mut planner = FftPlanner::new();
    let mut out = vec![C64::new(0.0, 0.0); n * n];
    for a in 0..n {
        let kx = k as f64 * a as f64 / n as f64;
        let eps = kx - kx.round();
        let mut col: Vec<C64> = (0..n)
            .map(|b| {
                samples[b * n + a] * C64::from_polar(1.0, 2.0 * PI * eps * b as f64 / n as f64)
            })
            .collect();
        derivative_1d(&mut col, &mut planner);
        for b in 0..n {
            let back = C64::from_polar(1.0, -2.0 * PI * eps * b as f64 / n as f64);
            out[b * n + a] = col[b] * back - C64::new(0.0, 2.0 * PI * eps) * samples[b * n + a];
        }
    }
    out
}

/// `∇_z = ∂_z − πk y τ̄ / Im τ` on grid samples.
pub fn nabla_z_samples(n: usize, k: usize, tau: TeichPoint, samples: &[C64]) -> Vec<C64> {
    let t = tau.tau();
    let den = t - t.conj();
    let dx = partial_x_samples(n, k, samples);
    let dy = partial_y_samples(n, k, samples);
    (0..n * n)
        .map(|i| {
            let y = (i / n) as f64 / n as f64;
            (dy[i] - t.conj() * dx[i]) / den
                - samples[i] * t.conj() * (PI * k as f64 * y / tau.im())
        })
        .collect()
}

/// `∇_z̄ = ∂_z̄ + πk y τ / Im τ` on grid samples.
pub fn nabla_zbar_samples(n: usize, k: usize, tau: TeichPoint, samples: &[C64]) -> Vec<C64> {
    let t = tau.tau();
    let den = t - t.conj();
    let dx = partial_x_samples(n, k, samples);
    let dy = partial_y_samples(n, k, samples);
    (0..n * n)
        .map(|i| {
            let y = (i / n) as f64 / n as f64;
            (t * dx[i] - dy[i]) / den + samples[i] * t * (PI * k as f64 * y / tau.im())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_round_trip_and_inner_product() {
        let n = 16;
        let s: Vec<C64> = (0..n * n)
            .map(|i| C64::new((i as f64).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let f = SpectralField::from_samples(n, &s);
        let back = f.to_samples();
        for (a, b) in s.iter().zip(&back) {
            assert!((a - b).norm() < 1e-12);
        }
        let direct: f64 = s.iter().map(|z| z.norm_sqr()).sum::<f64>() * 2.0 * PI / (n * n) as f64;
        assert!((f.inner(&f).re - direct).abs() < 1e-12);
    }

    #[test]
    fn mode_multiplication_matches_pointwise() {
        let n = 8;
        let s: Vec<C64> = (0..n * n).map(|i| C64::new(1.0 + i as f64, 0.5)).collect();
        let f = SpectralField::from_samples(n, &s).mul_mode(3, -2);
        let got = f.to_samples();
        for b in 0..n {
            for a in 0..n {
                let ph = 2.0 * PI * (3.0 * a as f64 - 2.0 * b as f64) / n as f64;
                let want = s[b * n + a] * C64::from_polar(1.0, ph);
                assert!((got[b * n + a] - want).norm() < 1e-10);
            }
        }
    }
}
