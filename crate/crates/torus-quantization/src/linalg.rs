//! Dense complex linear algebra helpers on top of `nalgebra`.

use geometry_core::C64;
use nalgebra::{DMatrix, DVector};

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Largest singular value.
pub fn op_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// `‖Lᴴ T L⁻ᴴ‖₂` for `G = L Lᴴ`: the operator norm of `T` when vectors are
/// measured by `cᴴ G c`. `l_to` and `l_from` factor the target and source
/// Gram matrices.
pub fn gram_norm_between(t: &CMat, l_to: &CMat, l_from: &CMat) -> f64 {
    let inv = l_from
        .adjoint()
        .try_inverse()
        .expect("Cholesky factor is invertible");
    op_norm(&(l_to.adjoint() * t * inv))
}

/// `G_from⁻¹ Tᴴ G_to`, the adjoint of `T: (C^k, G_from) → (C^k, G_to)`.
pub fn gram_adjoint_between(t: &CMat, g_to: &CMat, g_from: &CMat) -> CMat {
    let inv = g_from
        .clone()
        .try_inverse()
        .expect("Gram matrix is invertible");
    inv * t.adjoint() * g_to
}

/// Maximum entrywise modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Unit scalar `λ` minimizing `‖A − λB‖_F`, with the relative residual
/// `‖A − λB‖_F / ‖B‖_F`. Returns `λ = 1` when `tr(BᴴA)` vanishes.
pub fn best_unit_scalar(a: &CMat, b: &CMat) -> (C64, f64) {
    let inner: C64 = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
    let lambda = if inner.norm() > 0.0 {
        inner / inner.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let res = (a - b * lambda).norm() / b.norm().max(f64::MIN_POSITIVE);
    (lambda, res)
}

/// Distance of `m` from the scalar multiples of the identity in Frobenius
/// norm, relative to `‖m‖_F`.
pub fn distance_to_scalars(m: &CMat) -> f64 {
    let n = m.nrows().max(1) as f64;
    let s = m.trace() / n;
    let mut d = m.clone();
    for i in 0..m.nrows() {
        d[(i, i)] -= s;
    }
    d.norm() / m.norm().max(f64::MIN_POSITIVE)
}

/// Row-major `[re, im]` rows, the JSON layout used for every matrix.
pub fn to_rows(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

/// Inverse of [`to_rows`]. Returns `None` for ragged input.
pub fn from_rows(rows: &[Vec<[f64; 2]>]) -> Option<CMat> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != m) {
        return None;
    }
    Some(CMat::from_fn(n, m, |i, j| {
        C64::new(rows[i][j][0], rows[i][j][1])
    }))
}
