//! Fourier multipliers on desk-scale group models.
//!
//! The crate computes generalized singular numbers `μ_t` of block-diagonal
//! multipliers relative to the trace of the group von Neumann algebra,
//! noncommutative Lorentz norms, the level-set functionals that bound
//! `L^p → L^q` multiplier norms, Hausdorff-Young-Paley quantities and Sobolev
//! thresholds. Everything is exact on finite groups, truncated torus duals,
//! truncated `SU(2)` duals and Euclidean dual grids, and the `experiments`
//! module confronts the bounds with brute-force oracles and with lower bounds
//! on the operator norm obtained by nonlinear power iteration.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` deliberately rejects NaN

pub mod bound_functionals;
pub mod error;
pub mod experiments;
pub mod fourier;
pub mod group_models;
pub mod norm_estimation;
pub mod singular_values;

pub use error::{Error, Result};
pub use fourier::{BlockSymbol, GroupFunction};
pub use group_models::{DualBlock, GroupModel};
pub use singular_values::{StepFunction, WeightedSpectrum};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Hölder conjugate `p' = p / (p - 1)`; `1 ↦ ∞` and `∞ ↦ 1`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// `1/p - 1/q`, the exponent of the weak space `L^{r,∞}` with `1/r = 1/p - 1/q`.
pub fn weak_exponent(p: f64, q: f64) -> f64 {
    1.0 / p - 1.0 / q
}
