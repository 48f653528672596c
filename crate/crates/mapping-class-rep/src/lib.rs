//! `SL(2, Z)` acting on the torus, on the upper half-plane and on the
//! quantum bundle; the operators `U_k(h, p)` obtained by lifting and then
//! transporting back; and the diagnostics built on them: multipliers,
//! unitarity defect, kernel concentration and the fixed-point trace
//! formula.
//!
//! # Conventions
//!
//! `A = [[a, b], [c, d]]` acts on `τ` by `(aτ + b)/(cτ + d)`. For the
//! coordinate `z = x + τy` the matching torus map is `Φ = [[a, −b], [−c, d]]`:
//! its pushforward carries the structure `τ` to `A·τ`. Fixed points, the
//! tangent map and kernel graphs all refer to `Φ`.

mod class;
mod error;
mod kernel;
mod operator;
mod trace;

pub use class::{
    act_on_tau, fixed_point_set, u_phase, FixedPointDatum, MappingClass, MappingClassLift,
};
pub use error::MappingError;
pub use kernel::{default_probe, kernel_concentration, Kernel, KernelReport};
pub use operator::{
    default_path, lift_pullback, multiplier_defect, multiplier_from, quantum_operator,
    unitarity_defect, MultiplierReport, DEFAULT_PATH_SAMPLES, LIFT_TOLERANCE,
};
pub use trace::{
    fixed_points, reports_to_csv, reports_to_json, trace_compare, trace_predict, TraceReport,
};
