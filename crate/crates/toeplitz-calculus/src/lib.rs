//! Toeplitz operators `Π M_f Π` in the theta frame for symbols given as
//! finite Fourier series, the reduction of derivative operators to
//! multiplication operators, symbol fitting and the Egorov defect.
//!
//! All operator norms are Gram-weighted: `‖T‖ = ‖Lᴴ T L⁻ᴴ‖₂` for the
//! Cholesky factor `gram = L Lᴴ`.

mod error;
mod ops;
mod symbol;

pub use error::ToeplitzError;
pub use ops::{
    conjugation_defect, egorov_defect, gram_norm, reduce_first_order, reduce_second_order,
    symbol_fit, toeplitz_op, tuynman_reduce, tuynman_reduce_second_order, tuynman_residual,
    tuynman_residual_second_order, SymbolFit, ToeplitzMatrix, VectorField10, DEFAULT_BAND,
};
pub use symbol::{Symbol, TorusMap};
