use crate::linalg::{CMat, CVec};
use crate::spectral::{nabla_zbar_samples, SpectralField};
use crate::QuantError;
use geometry_core::{TeichPoint, C64};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest admissible truncation `N_t`.
pub const TRUNCATION_CAP: usize = 64;

/// Tensor power `k ≥ 1` of the prequantum bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Level(usize);

impl Level {
    pub fn new(k: i64) -> Result<Self, QuantError> {
        if k < 1 {
            return Err(QuantError::InvalidLevel(k));
        }
        Ok(Self(k as usize))
    }

    pub fn get(&self) -> usize {
        self.0
    }
}

/// Coordinates of an element of `H_{k,τ}` in the theta frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionVector(pub CVec);

impl SectionVector {
    pub fn zeros(k: usize) -> Self {
        Self(CVec::zeros(k))
    }

    /// The frame element `θ_l`.
    pub fn basis(k: usize, l: usize) -> Self {
        let mut v = CVec::zeros(k);
        v[l] = C64::new(1.0, 0.0);
        Self(v)
    }
}

/// One lattice term of a theta function on the grid: the unit-frame Fourier
/// coefficient `val` at flat index `idx = b·N + f`, with `t = n + l/k + y_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub idx: u32,
    pub t: f64,
    pub val: C64,
}

/// Half-width in `t` of the kept Gaussian terms: the dropped tail
/// `exp(−πk Im τ t²)` is below `tol·1e−2`.
pub fn truncation_radius(k: usize, im_tau: f64, tol: f64) -> f64 {
    ((100.0 / tol).ln() / (PI * k as f64 * im_tau)).sqrt()
}

/// Default grid size `max(64, 8⌈sqrt(k·max(1, |τ|²)/Im τ)⌉)`.
///
/// The `|τ|²` factor resolves the `y`-oscillation `e^{iπk Re τ t²}`.
pub fn grid_floor(k: usize, tau: TeichPoint) -> usize {
    let r = (k as f64 * tau.tau().norm_sqr().max(1.0) / tau.im())
        .sqrt()
        .ceil() as usize;
    64.max(8 * r)
}

/// JSON-serializable summary of a frame, used for caching.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameDescriptor {
    pub k: usize,
    pub tau: [f64; 2],
    pub tol: f64,
    pub n_t: usize,
    pub n_g: usize,
    /// Row-major `[re, im]` pairs.
    pub gram: Vec<[f64; 2]>,
}

/// The theta frame of `H_{k,τ}` on an `N_g × N_g` grid, with its Gram
/// matrix and Cholesky factor.
#[derive(Debug, Clone)]
pub struct QuantumFrame {
    k: usize,
    tau: TeichPoint,
    tol: f64,
    n_t: usize,
    n_g: usize,
    radius: f64,
    basis: Vec<Vec<Entry>>,
    bucket_start: Vec<u32>,
    bucket_items: Vec<(u32, u32)>,
    gram: CMat,
    gram_inv: CMat,
    chol_l: CMat,
}

/// Builds the frame at the default grid size.
pub fn build_frame(k: Level, tau: TeichPoint, tol: f64) -> Result<QuantumFrame, QuantError> {
    build_frame_with_grid(k, tau, tol, grid_floor(k.get(), tau))
}

/// Builds the frame on an explicit `n_g × n_g` grid.
pub fn build_frame_with_grid(
    k: Level,
    tau: TeichPoint,
    tol: f64,
    n_g: usize,
) -> Result<QuantumFrame, QuantError> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(QuantError::InvalidTolerance(tol));
    }
    let k = k.get();
    let radius = truncation_radius(k, tau.im(), tol);
    let n_t = radius.ceil() as usize + 1;
    if n_t > TRUNCATION_CAP {
        return Err(QuantError::TruncationOverflow {
            needed: n_t,
            cap: TRUNCATION_CAP,
        });
    }
    let hw = tau.half_form_weight();
    let kf = k as f64;
    let mut basis = Vec::with_capacity(k);
    for l in 0..k {
        let mut entries = Vec::new();
        for b in 0..n_g {
            let y = b as f64 / n_g as f64;
            let off = l as f64 / kf + y;
            let lo = (-radius - off).ceil() as i64;
            let hi = (radius - off).floor() as i64;
            for n in lo..=hi {
                let t = n as f64 + off;
                let freq = (k as i64 * n + l as i64).rem_euclid(n_g as i64) as usize;
                let val = (C64::new(0.0, PI * kf * t * t) * tau.tau()).exp() * hw;
                entries.push(Entry {
                    idx: (b * n_g + freq) as u32,
                    t,
                    val,
                });
            }
        }
        basis.push(entries);
    }
    let mut counts = vec![0u32; n_g * n_g + 1];
    for e in basis.iter().flatten() {
        counts[e.idx as usize + 1] += 1;
    }
    for i in 0..n_g * n_g {
        counts[i + 1] += counts[i];
    }
    let bucket_start = counts.clone();
    let mut fill = counts;
    let mut bucket_items = vec![(0u32, 0u32); bucket_start[n_g * n_g] as usize];
    for (l, entries) in basis.iter().enumerate() {
        for (pos, e) in entries.iter().enumerate() {
            let slot = &mut fill[e.idx as usize];
            bucket_items[*slot as usize] = (l as u32, pos as u32);
            *slot += 1;
        }
    }
    let mut frame = QuantumFrame {
        k,
        tau,
        tol,
        n_t,
        n_g,
        radius,
        basis,
        bucket_start,
        bucket_items,
        gram: CMat::zeros(k, k),
        gram_inv: CMat::zeros(k, k),
        chol_l: CMat::zeros(k, k),
    };
    let mut gram = CMat::zeros(k, k);
    for l in 0..k {
        gram.set_column(l, &frame.weighted_products(l, |_| C64::new(1.0, 0.0)));
    }
    let rank_err = |rank| QuantError::RankDeficient { rank, k };
    let chol = gram.clone().cholesky().ok_or_else(|| rank_err(0))?;
    let l = chol.l();
    let diag: Vec<f64> = (0..k).map(|i| l[(i, i)].norm_sqr()).collect();
    let top = diag.iter().cloned().fold(0.0, f64::max);
    let rank = diag.iter().filter(|&&d| d > 1e-12 * top).count();
    if rank != k {
        return Err(rank_err(rank));
    }
    frame.chol_l = l;
    frame.gram_inv = chol.inverse();
    frame.gram = gram;
    Ok(frame)
}

impl QuantumFrame {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn level(&self) -> Level {
        Level(self.k)
    }

    pub fn tau(&self) -> TeichPoint {
        self.tau
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Truncation `N_t = ⌈R⌉ + 1`.
    pub fn n_t(&self) -> usize {
        self.n_t
    }

    /// Grid size `N_g`.
    pub fn n_g(&self) -> usize {
        self.n_g
    }

    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    pub fn gram_inv(&self) -> &CMat {
        &self.gram_inv
    }

    /// Lower Cholesky factor `L` with `gram = L Lᴴ`.
    pub fn chol_l(&self) -> &CMat {
        &self.chol_l
    }

    /// Lattice terms of `θ_l` on the grid.
    pub fn basis_entries(&self, l: usize) -> &[Entry] {
        &self.basis[l]
    }

    /// `y` coordinate of a flat grid index.
    pub fn y_of(&self, idx: u32) -> f64 {
        (idx as usize / self.n_g) as f64 / self.n_g as f64
    }

    /// Grid products `⟨θ_i, w(t) θ_l⟩` for all `i`, where `w` multiplies each
    /// lattice term by a function of its `t`.
    pub fn weighted_products(&self, l: usize, w: impl Fn(f64) -> C64) -> CVec {
        let mut acc = CVec::zeros(self.k);
        for e in &self.basis[l] {
            let v = e.val * w(e.t);
            let (s, t) = (
                self.bucket_start[e.idx as usize],
                self.bucket_start[e.idx as usize + 1],
            );
            for &(i, pos) in &self.bucket_items[s as usize..t as usize] {
                acc[i as usize] += self.basis[i as usize][pos as usize].val.conj() * v;
            }
        }
        acc * C64::new(2.0 * PI / self.n_g as f64, 0.0)
    }

    /// Grid products `⟨θ_i, e^{2πi(μx+νy)} w(t) θ_l⟩` for all `i`, computed
    /// term by term on the sparse theta data.
    pub fn mode_products(&self, l: usize, mu: i64, nu: i64, w: impl Fn(f64) -> C64) -> CVec {
        let n = self.n_g as i64;
        let mut acc = CVec::zeros(self.k);
        for e in &self.basis[l] {
            let b = e.idx as i64 / n;
            let f = e.idx as i64 % n;
            let idx = (b * n + (f + mu).rem_euclid(n)) as usize;
            let ph = C64::from_polar(1.0, 2.0 * PI * nu as f64 * b as f64 / n as f64);
            let v = e.val * w(e.t) * ph;
            let (s, t) = (self.bucket_start[idx], self.bucket_start[idx + 1]);
            for &(i, pos) in &self.bucket_items[s as usize..t as usize] {
                acc[i as usize] += self.basis[i as usize][pos as usize].val.conj() * v;
            }
        }
        acc * C64::new(2.0 * PI / self.n_g as f64, 0.0)
    }

    /// Grid products `⟨θ_i, F⟩` for all `i`.
    pub fn products(&self, field: &SpectralField) -> CVec {
        assert_eq!(field.n, self.n_g, "field grid must match the frame grid");
        let mut acc = CVec::zeros(self.k);
        for (i, entries) in self.basis.iter().enumerate() {
            acc[i] = entries
                .iter()
                .map(|e| e.val.conj() * field.data[e.idx as usize])
                .sum();
        }
        acc * C64::new(2.0 * PI / self.n_g as f64, 0.0)
    }

    /// The field `w(t)·θ_l`, term by term.
    pub fn basis_field(&self, l: usize, w: impl Fn(f64) -> C64) -> SpectralField {
        let mut f = SpectralField::zeros(self.n_g);
        for e in &self.basis[l] {
            f.data[e.idx as usize] += e.val * w(e.t);
        }
        f
    }

    /// The field `Σ c_l θ_l`.
    pub fn synthesize(&self, s: &SectionVector) -> SpectralField {
        let mut f = SpectralField::zeros(self.n_g);
        for (l, entries) in self.basis.iter().enumerate() {
            let c = s.0[l];
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            for e in entries {
                f.data[e.idx as usize] += e.val * c;
            }
        }
        f
    }

    /// Coordinates of the orthogonal projection of `field` onto the frame,
    /// with the relative norm of the discarded component.
    pub fn bergman_project(&self, field: &SpectralField) -> (SectionVector, f64) {
        let coeffs = &self.gram_inv * self.products(field);
        let s = SectionVector(coeffs);
        let mut rest = field.clone();
        rest.add_assign(&self.synthesize(&s), C64::new(-1.0, 0.0));
        let denom = field.norm();
        let res = if denom > 0.0 {
            rest.norm() / denom
        } else {
            0.0
        };
        (s, res)
    }

    /// [`QuantumFrame::bergman_project`] on raw grid samples
    /// `samples[b·N + a]`.
    pub fn bergman_project_samples(
        &self,
        samples: &[C64],
    ) -> Result<(SectionVector, f64), QuantError> {
        if samples.len() != self.n_g * self.n_g {
            return Err(QuantError::ShapeMismatch(format!(
                "{} samples for a {}x{} grid",
                samples.len(),
                self.n_g,
                self.n_g
            )));
        }
        Ok(self.bergman_project(&SpectralField::from_samples(self.n_g, samples)))
    }

    /// Unit-frame value of `θ_l` at an arbitrary point.
    pub fn evaluate_basis(&self, l: usize, x: f64, y: f64) -> C64 {
        let kf = self.k as f64;
        let off = l as f64 / kf + y;
        let r = self.radius + 1.0;
        let lo = (-r - off).ceil() as i64;
        let hi = (r - off).floor() as i64;
        let mut s = C64::new(0.0, 0.0);
        for n in lo..=hi {
            let t = n as f64 + off;
            let m = n as f64 + l as f64 / kf;
            let phase = C64::new(0.0, PI * kf * t * t) * self.tau.tau()
                + C64::new(0.0, 2.0 * PI * kf * m * x);
            s += phase.exp();
        }
        s * self.tau.half_form_weight()
    }

    /// Unit-frame values of the section at the given points.
    pub fn evaluate_section(&self, s: &SectionVector, points: &[(f64, f64)]) -> Vec<C64> {
        points
            .iter()
            .map(|&(x, y)| {
                (0..self.k)
                    .map(|l| s.0[l] * self.evaluate_basis(l, x, y))
                    .sum()
            })
            .collect()
    }

    /// Unit-frame values on the frame grid, `out[b·N + a]`.
    pub fn grid_samples(&self, s: &SectionVector) -> Vec<C64> {
        self.synthesize(s).to_samples()
    }

    /// `c₁ᴴ · gram · c₂`.
    pub fn liouville_inner(&self, s1: &SectionVector, s2: &SectionVector) -> C64 {
        (s1.0.adjoint() * &self.gram * &s2.0)[(0, 0)]
    }

    /// The same product by grid quadrature of the synthesized fields.
    pub fn quadrature_inner(&self, s1: &SectionVector, s2: &SectionVector) -> C64 {
        self.synthesize(s1).inner(&self.synthesize(s2))
    }

    /// Largest relative `‖∇_z̄ θ_l‖ / ‖θ_l‖` under spectral differentiation.
    pub fn holomorphicity_residual(&self) -> f64 {
        let n = self.n_g;
        (0..self.k)
            .map(|l| {
                let s = self.grid_samples(&SectionVector::basis(self.k, l));
                let d = nabla_zbar_samples(n, self.k, self.tau, &s);
                let num: f64 = d.iter().map(|z| z.norm_sqr()).sum();
                let den: f64 = s.iter().map(|z| z.norm_sqr()).sum();
                (num / den).sqrt() / (self.k as f64).max(1.0)
            })
            .fold(0.0, f64::max)
    }

    /// Largest quasi-periodicity defect `|θ(x+1,y) − θ(x,y)|` and
    /// `|θ(x,y+1) − e^{−2πikx} θ(x,y)|` over a probe set, relative to the
    /// peak modulus.
    pub fn quasi_periodicity_residual(&self) -> f64 {
        let kf = self.k as f64;
        let mut worst = 0.0f64;
        for l in 0..self.k {
            for p in 0..7 {
                let (x, y) = (0.13 * p as f64 + 0.05, 0.37 * p as f64 % 1.0);
                let v = self.evaluate_basis(l, x, y);
                let vx = self.evaluate_basis(l, x + 1.0, y);
                let vy = self.evaluate_basis(l, x, y + 1.0);
                let cocycle = C64::from_polar(1.0, -2.0 * PI * kf * x);
                worst = worst.max((vx - v).norm()).max((vy - cocycle * v).norm());
            }
        }
        worst / self.tau.half_form_weight()
    }

    /// Largest Gram entry change when the grid is doubled.
    pub fn refinement_defect(&self) -> Result<f64, QuantError> {
        let fine = build_frame_with_grid(self.level(), self.tau, self.tol, 2 * self.n_g)?;
        Ok(crate::linalg::max_abs(&(fine.gram() - &self.gram)))
    }

    /// Ratio of extreme Gram eigenvalues.
    pub fn condition_number(&self) -> f64 {
        let e = self.gram.clone().symmetric_eigen().eigenvalues;
        e.max() / e.min()
    }

    pub fn descriptor(&self) -> FrameDescriptor {
        FrameDescriptor {
            k: self.k,
            tau: [self.tau.re(), self.tau.im()],
            tol: self.tol,
            n_t: self.n_t,
            n_g: self.n_g,
            gram: self.gram.transpose().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.descriptor()).expect("descriptor serializes")
    }

    /// Rebuilds the frame described by `d` and checks the stored Gram matrix
    /// within `1e−12`.
    pub fn from_descriptor(d: &FrameDescriptor) -> Result<Self, QuantError> {
        let tau = TeichPoint::from_parts(d.tau[0], d.tau[1])?;
        let level = Level::new(d.k as i64)?;
        let frame = build_frame_with_grid(level, tau, d.tol, d.n_g)?;
        if d.gram.len() != d.k * d.k || frame.n_t != d.n_t {
            return Err(QuantError::ShapeMismatch(
                "descriptor does not match its level".into(),
            ));
        }
        let diff = frame
            .gram
            .transpose()
            .iter()
            .zip(&d.gram)
            .map(|(z, p)| (z - C64::new(p[0], p[1])).norm())
            .fold(0.0, f64::max);
        if diff > 1e-12 {
            return Err(QuantError::DescriptorMismatch(diff));
        }
        Ok(frame)
    }

    pub fn from_json(text: &str) -> Result<Self, QuantError> {
        let d: FrameDescriptor =
            serde_json::from_str(text).map_err(|e| QuantError::Json(e.to_string()))?;
        Self::from_descriptor(&d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invalid_inputs() {
        assert_eq!(Level::new(0), Err(QuantError::InvalidLevel(0)));
        let k = Level::new(2).unwrap();
        assert!(matches!(
            build_frame(k, TeichPoint::i(), 1e-3),
            Err(QuantError::InvalidTolerance(_))
        ));
        let thin = TeichPoint::from_parts(0.0, 1e-4).unwrap();
        assert!(matches!(
            build_frame(k, thin, 1e-10),
            Err(QuantError::TruncationOverflow { .. })
        ));
    }

    #[test]
    fn gram_is_scalar() {
        let f = build_frame(
            Level::new(3).unwrap(),
            TeichPoint::from_parts(0.2, 0.8).unwrap(),
            1e-12,
        )
        .unwrap();
        let want = (2.0 * PI / 3.0).sqrt();
        for i in 0..3 {
            for j in 0..3 {
                let w = if i == j { want } else { 0.0 };
                assert!((f.gram()[(i, j)] - w).norm() < 1e-12);
            }
        }
    }
}
