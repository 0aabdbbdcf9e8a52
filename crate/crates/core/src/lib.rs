//! Discrete variational calculus for poly-Laplacian systems on finite weighted
//! graphs.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: weighted graphs, vertex functions and their file formats.
//! * [`calculus`]: gradient form, Laplacian, p-Laplacian, poly-Laplacian,
//!   Lebesgue/Sobolev norms and embedding constants.
//! * [`nonlinearity`]: nonlinear terms `F(x, t, s)`, the radial cut-offs and
//!   the cut-off modified nonlinearities, plus sampled growth checks.
//! * [`energy`]: the energy functional of the coupled system, its exact
//!   gradient and the weak-solution residual.
//! * [`bounds`]: closed-form parameter thresholds and a-priori solution bounds.
//! * [`solver`]: mountain-pass path deformation, multi-start descent, Newton
//!   refinement and parameter sweeps.
//! * [`problem`]: the problem file format and built-in fixtures.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod calculus;
pub mod energy;
pub mod error;
pub mod graph;
pub mod nonlinearity;
pub mod problem;
pub mod solver;

pub use error::{Error, Result};
pub use graph::{parse_graph, SystemState, VertexFunction, WeightedGraph};

/// Locale-independent scientific notation with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// `base^exp` for `base >= 0`, using `powi` when the exponent is an integer.
pub(crate) fn pow(base: f64, exp: f64) -> f64 {
    if exp.fract() == 0.0 && exp.abs() < i32::MAX as f64 {
        base.powi(exp as i32)
    } else {
        base.powf(exp)
    }
}

/// `|x|^(p-2) x`, extended by 0 at `x = 0`.
pub(crate) fn signed_pow(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        pow(x.abs(), p - 1.0).copysign(x)
    }
}
