use crate::{Symbol, ToeplitzError, TorusMap};
use geometry_core::{TeichPoint, C64};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use torus_quantization::linalg::{gram_norm_between, CMat};
use torus_quantization::QuantumFrame;

/// Default maximal Fourier index for [`symbol_fit`].
pub const DEFAULT_BAND: i64 = 4;

/// Runtime tolerance of the first-order reduction check.
const FIRST_ORDER_CHECK: f64 = 1e-8;
/// Runtime tolerance of the second-order reduction check.
const SECOND_ORDER_CHECK: f64 = 1e-7;
/// Relative singular value below which a fit direction counts as lost.
const FIT_RANK_TOL: f64 = 1e-12;

/// A frame-coordinate operator together with its level and point.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzMatrix {
    pub k: usize,
    pub tau: TeichPoint,
    pub t: CMat,
}

/// A vector field `X = g ∂_z` of type (1,0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorField10 {
    pub g: Symbol,
}

/// Result of [`symbol_fit`]. `residual` is the relative Frobenius misfit in
/// the gram-weighted basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolFit {
    pub symbol: Symbol,
    pub residual: f64,
    pub rank: usize,
}

fn check_band(frame: &QuantumFrame, f: &Symbol) -> Result<(), ToeplitzError> {
    let n = frame.n_g();
    for &(m, nn) in f.coeffs.keys() {
        if 4 * m.abs().max(nn.abs()) as usize > n {
            return Err(ToeplitzError::Aliasing(m, nn, n));
        }
    }
    Ok(())
}

/// `Σ_w c_w ⟨θ_i, e_w w(t) θ_l⟩` as a k×k matrix (not yet gram-inverted).
fn weighted_matrix(frame: &QuantumFrame, f: &Symbol, w: impl Fn(f64) -> C64 + Copy) -> CMat {
    let k = frame.k();
    let mut q = CMat::zeros(k, k);
    for (&(m, n), &c) in &f.coeffs {
        for l in 0..k {
            let col = frame.mode_products(l, m, n, w) * c;
            let mut dst = q.column_mut(l);
            dst += col;
        }
    }
    q
}

/// `Π M_f Π` in frame coordinates: `gram⁻¹ ⟨θ_i, f θ_j⟩`.
pub fn toeplitz_op(frame: &QuantumFrame, f: &Symbol) -> Result<ToeplitzMatrix, ToeplitzError> {
    check_band(frame, f)?;
    let q = weighted_matrix(frame, f, |_| C64::new(1.0, 0.0));
    Ok(ToeplitzMatrix {
        k: frame.k(),
        tau: frame.tau(),
        t: frame.gram_inv() * q,
    })
}

/// Gram-weighted operator norm on the frame.
pub fn gram_norm(frame: &QuantumFrame, t: &CMat) -> f64 {
    gram_norm_between(t, frame.chol_l(), frame.chol_l())
}

/// `Π ∇_X Π` for `X = g ∂_z`, using `∇_z` on a theta term `= 2πik t`.
fn nabla_matrix(frame: &QuantumFrame, x: &VectorField10) -> CMat {
    let k = frame.k() as f64;
    let q = weighted_matrix(frame, &x.g, move |t| C64::new(0.0, 2.0 * PI * k * t));
    frame.gram_inv() * q
}

/// `Π ∇_{X1} ∇_{X2} Π`.
fn nabla2_matrix(frame: &QuantumFrame, x1: &VectorField10, x2: &VectorField10) -> CMat {
    let tau = frame.tau();
    let k = frame.k() as f64;
    let v = tau.im();
    // ∇_{X1}(g2 ∇_z s) = g1 (∂_z g2) ∇_z s + g1 g2 ∇_z∇_z s.
    let first = x1.g.mul(&x2.g.d_z(tau));
    let second = x1.g.mul(&x2.g);
    let q1 = weighted_matrix(frame, &first, move |t| C64::new(0.0, 2.0 * PI * k * t));
    let q2 = weighted_matrix(frame, &second, move |t| {
        C64::new(PI * k / v - 4.0 * PI * PI * k * k * t * t, 0.0)
    });
    frame.gram_inv() * (q1 + q2)
}

/// Multiplier of `∇_X` on holomorphic sections: `f = −∂_z g`, the negative
/// Liouville divergence of `X = g ∂_z`.
pub fn reduce_first_order(x: &VectorField10, tau: TeichPoint) -> Symbol {
    x.g.d_z(tau).scale(C64::new(-1.0, 0.0))
}

/// Multiplier of `∇_{X1}∇_{X2}`: `f = ∂_z(g2 ∂_z g1)`.
pub fn reduce_second_order(x1: &VectorField10, x2: &VectorField10, tau: TeichPoint) -> Symbol {
    x2.g.mul(&x1.g.d_z(tau)).d_z(tau)
}

/// The reduced symbol of `∇_X` with `‖Π∇_XΠ − Π M_f Π‖` on the frame.
pub fn tuynman_residual(
    frame: &QuantumFrame,
    x: &VectorField10,
) -> Result<(Symbol, f64), ToeplitzError> {
    check_band(frame, &x.g)?;
    let f = reduce_first_order(x, frame.tau());
    let lhs = nabla_matrix(frame, x);
    let rhs = toeplitz_op(frame, &f)?.t;
    Ok((f, gram_norm(frame, &(lhs - rhs))))
}

/// The reduced symbol of `∇_{X1}∇_{X2}` with the residual of the identity.
pub fn tuynman_residual_second_order(
    frame: &QuantumFrame,
    x1: &VectorField10,
    x2: &VectorField10,
) -> Result<(Symbol, f64), ToeplitzError> {
    check_band(frame, &x1.g.mul(&x2.g))?;
    let f = reduce_second_order(x1, x2, frame.tau());
    let lhs = nabla2_matrix(frame, x1, x2);
    let rhs = toeplitz_op(frame, &f)?.t;
    Ok((f, gram_norm(frame, &(lhs - rhs))))
}

/// Reduces `Π ∇_X Π` to `Π M_f Π` and checks the identity on the frame.
pub fn tuynman_reduce(frame: &QuantumFrame, x: &VectorField10) -> Result<Symbol, ToeplitzError> {
    let (f, err) = tuynman_residual(frame, x)?;
    if err >= FIRST_ORDER_CHECK {
        return Err(ToeplitzError::ReductionMismatch(err));
    }
    Ok(f)
}

/// Reduces `Π ∇_{X1}∇_{X2} Π` to `Π M_f Π` and checks the identity.
pub fn tuynman_reduce_second_order(
    frame: &QuantumFrame,
    x1: &VectorField10,
    x2: &VectorField10,
) -> Result<Symbol, ToeplitzError> {
    let (f, err) = tuynman_residual_second_order(frame, x1, x2)?;
    if err >= SECOND_ORDER_CHECK {
        return Err(ToeplitzError::ReductionMismatch(err));
    }
    Ok(f)
}

fn invert(u: &CMat) -> Result<CMat, ToeplitzError> {
    if !u.is_square() {
        return Err(ToeplitzError::ShapeMismatch(format!(
            "{}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let sv = u.clone().svd(false, false).singular_values;
    let (lo, hi) = (sv.min(), sv.max());
    if hi.is_nan() || hi <= 0.0 || lo / hi < 1e-12 {
        return Err(ToeplitzError::SingularU);
    }
    u.clone().try_inverse().ok_or(ToeplitzError::SingularU)
}

/// `‖U⁻¹ T_f U − T_{f∘Φ}‖` in the gram-weighted norm.
pub fn egorov_defect(
    frame: &QuantumFrame,
    u: &CMat,
    phi: &TorusMap,
    f: &Symbol,
) -> Result<f64, ToeplitzError> {
    let inv = invert(u)?;
    if inv.nrows() != frame.k() {
        return Err(ToeplitzError::ShapeMismatch(format!(
            "U is {}x{}, k = {}",
            u.nrows(),
            u.ncols(),
            frame.k()
        )));
    }
    let tf = toeplitz_op(frame, f)?.t;
    let tpull = toeplitz_op(frame, &f.pullback(phi))?.t;
    Ok(gram_norm(frame, &(inv * tf * u - tpull)))
}

/// `‖U⁻¹ T_f U − T_f‖` in the gram-weighted norm.
pub fn conjugation_defect(
    frame: &QuantumFrame,
    u: &CMat,
    f: &Symbol,
) -> Result<f64, ToeplitzError> {
    egorov_defect(frame, u, &[[1, 0], [0, 1]], f)
}

/// Least-squares symbol supported in `max(|m|, |n|) ≤ band` whose Toeplitz
/// matrix is closest to `t` in gram-weighted Frobenius norm.
pub fn symbol_fit(frame: &QuantumFrame, t: &CMat, band: i64) -> Result<SymbolFit, ToeplitzError> {
    let k = frame.k();
    if t.shape() != (k, k) {
        return Err(ToeplitzError::ShapeMismatch(format!(
            "T is {}x{}, k = {}",
            t.nrows(),
            t.ncols(),
            k
        )));
    }
    let l = frame.chol_l();
    let l_inv_h = l
        .adjoint()
        .try_inverse()
        .expect("Cholesky factor is invertible");
    let weigh = |m: &CMat| {
        (l.adjoint() * m * &l_inv_h)
            .iter()
            .copied()
            .collect::<Vec<C64>>()
    };
    let modes: Vec<(i64, i64)> = (-band..=band)
        .flat_map(|m| (-band..=band).map(move |n| (m, n)))
        .collect();
    let mut cols = Vec::with_capacity(modes.len());
    for &(m, n) in &modes {
        let tw = toeplitz_op(frame, &Symbol::mode(m, n, C64::new(1.0, 0.0)))?.t;
        cols.push(DVector::from_vec(weigh(&tw)));
    }
    let a = CMat::from_columns(&cols);
    let b = DVector::from_vec(weigh(t));
    let normal = a.adjoint() * &a;
    let rhs = a.adjoint() * &b;
    let svd = normal.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > FIT_RANK_TOL * smax)
        .count();
    if rank < modes.len() {
        return Err(ToeplitzError::IllPosedFit {
            rank,
            unknowns: modes.len(),
        });
    }
    let c = normal.lu().solve(&rhs).ok_or(ToeplitzError::IllPosedFit {
        rank,
        unknowns: modes.len(),
    })?;
    let fitted = &a * &c;
    let residual = (&b - fitted).norm() / b.norm().max(f64::MIN_POSITIVE);
    let mut symbol = Symbol::zero();
    for (i, &(m, n)) in modes.iter().enumerate() {
        if c[i].norm() > 0.0 {
            symbol.coeffs.insert((m, n), c[i]);
        }
    }
    Ok(SymbolFit {
        symbol,
        residual,
        rank,
    })
}
