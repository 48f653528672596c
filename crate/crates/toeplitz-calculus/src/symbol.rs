use geometry_core::{TeichPoint, C64};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Integer matrix of a linear torus map `p ↦ Φp`.
pub type TorusMap = [[i64; 2]; 2];

/// A finite Fourier series `f = Σ c_{m,n} e^{2πi(mx + ny)}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Symbol {
    pub coeffs: BTreeMap<(i64, i64), C64>,
}

impl Symbol {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C64) -> Self {
        Self::mode(0, 0, c)
    }

    /// `c·e^{2πi(mx + ny)}`.
    pub fn mode(m: i64, n: i64, c: C64) -> Self {
        let mut s = Self::zero();
        s.coeffs.insert((m, n), c);
        s
    }

    /// `cos 2π(mx + ny)`.
    pub fn cos(m: i64, n: i64) -> Self {
        let h = C64::new(0.5, 0.0);
        Self::mode(m, n, h).add(&Self::mode(-m, -n, h))
    }

    /// `sin 2π(mx + ny)`.
    pub fn sin(m: i64, n: i64) -> Self {
        let h = C64::new(0.0, -0.5);
        Self::mode(m, n, h).add(&Self::mode(-m, -n, -h))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&key, &c) in &other.coeffs {
            *out.coeffs.entry(key).or_default() += c;
        }
        out.prune()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&k, &v)| (k, v * c)).collect(),
        }
        .prune()
    }

    /// Pointwise product (convolution of coefficients).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(m1, n1), &a) in &self.coeffs {
            for (&(m2, n2), &b) in &other.coeffs {
                *out.coeffs.entry((m1 + m2, n1 + n2)).or_default() += a * b;
            }
        }
        out.prune()
    }

    fn prune(mut self) -> Self {
        self.coeffs.retain(|_, c| c.norm() != 0.0);
        self
    }

    /// `f ∘ Φ`: the mode `w` becomes `Φᵀw`.
    pub fn pullback(&self, phi: &TorusMap) -> Self {
        let mut out = Self::zero();
        for (&(m, n), &c) in &self.coeffs {
            let key = (phi[0][0] * m + phi[1][0] * n, phi[0][1] * m + phi[1][1] * n);
            *out.coeffs.entry(key).or_default() += c;
        }
        out.prune()
    }

    /// `∂_z f` at `τ`, with `∂_z e^{2πi(μx+νy)} = 2πi(ν − τ̄μ)/(τ − τ̄)·e`.
    pub fn d_z(&self, tau: TeichPoint) -> Self {
        let t = tau.tau();
        let den = t - t.conj();
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&(m, n), &c)| {
                    let f = C64::new(0.0, 2.0 * PI)
                        * (C64::new(n as f64, 0.0) - t.conj() * m as f64)
                        / den;
                    ((m, n), c * f)
                })
                .collect(),
        }
        .prune()
    }

    /// Pointwise value.
    pub fn eval(&self, x: f64, y: f64) -> C64 {
        self.coeffs
            .iter()
            .map(|(&(m, n), &c)| c * C64::from_polar(1.0, 2.0 * PI * (m as f64 * x + n as f64 * y)))
            .sum()
    }

    /// `c_{−w} = conj(c_w)` within `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|(&(m, n), &c)| {
            let mirror = self.coeffs.get(&(-m, -n)).copied().unwrap_or_default();
            (mirror - c.conj()).norm() <= tol
        })
    }

    /// Largest `max(|m|, |n|)` in the support.
    pub fn band(&self) -> i64 {
        self.coeffs
            .keys()
            .map(|&(m, n)| m.abs().max(n.abs()))
            .max()
            .unwrap_or(0)
    }

    /// `max |f|` on an `n×n` sample grid.
    pub fn sup_on_grid(&self, n: usize) -> f64 {
        let mut best = 0.0f64;
        for b in 0..n {
            for a in 0..n {
                best = best.max(self.eval(a as f64 / n as f64, b as f64 / n as f64).norm());
            }
        }
        best
    }

    /// Largest coefficient difference.
    pub fn distance(&self, other: &Self) -> f64 {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
            .coeffs
            .values()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<String, [f64; 2]> = self
            .coeffs
            .iter()
            .map(|(&(m, n), &c)| (format!("{m},{n}"), [c.re, c.im]))
            .collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<String, [f64; 2]>::deserialize(d)?;
        let mut coeffs = BTreeMap::new();
        for (key, [re, im]) in map {
            let (m, n) = key
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| serde::de::Error::custom(format!("bad mode key {key:?}")))?;
            coeffs.insert((m, n), C64::new(re, im));
        }
        Ok(Self { coeffs })
    }
}
