//! Numerical critical-point search for the modified functionals.
//!
//! * [`mountain_pass`]: discrete path deformation between the origin and an
//!   anchor of negative energy, for the superlinear system.
//! * [`minimize`]: seeded multi-start descent with backtracking, for the
//!   coercive sublinear system.
//! * [`newton_refine`]: damped Newton on the gradient map with a matrix-free
//!   GMRES inner solve.
//! * [`sweep_lambda`]: independent solves over a list of `lambda` values.

mod descent;
mod mountain_pass;
mod newton;
mod sweep;

pub use descent::{minimize, minimize_report, MinimizeReport, RestartOutcome};
pub use mountain_pass::mountain_pass;
pub use newton::newton_refine;
pub use sweep::{sweep_csv, sweep_lambda, SweepRow, SWEEP_HEADER};

use std::str::FromStr;

use crate::energy::Problem;
use crate::error::{invalid, Error, Result};
use crate::fmt17;
use crate::graph::SystemState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    MountainPass,
    Minimize,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mountain-pass" => Ok(Self::MountainPass),
            "minimize" => Ok(Self::Minimize),
            other => invalid(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub mode: Mode,
    /// Convergence threshold on the sup norm of the gradient pair.
    pub residual_tol: f64,
    pub max_iters: usize,
    pub path_points: usize,
    pub restarts: usize,
    /// Amplitude of random initial states; `None` means `delta / 8`.
    pub init_scale: Option<f64>,
    pub seed: u64,
    /// Two solutions closer than this in the `W` norm are the same.
    pub dedup_dist: f64,
    /// Residual at which first-order iterations hand over to Newton.
    pub newton_switch: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            mode: Mode::MountainPass,
            residual_tol: 1e-8,
            max_iters: 20_000,
            path_points: 41,
            restarts: 32,
            init_scale: None,
            seed: 0,
            dedup_dist: 1e-4,
            newton_switch: 1e-3,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.residual_tol > 0.0) {
            return invalid("residual_tol must be > 0");
        }
        if self.path_points < 3 {
            return invalid("path_points must be >= 3");
        }
        if self.restarts < 1 {
            return invalid("restarts must be >= 1");
        }
        if self.max_iters < 1 {
            return invalid("max_iters must be >= 1");
        }
        if let Some(s) = self.init_scale {
            if !(s >= 0.0 && s.is_finite()) {
                return invalid("init_scale must be >= 0");
            }
        }
        if !(self.dedup_dist > 0.0) {
            return invalid("dedup_dist must be > 0");
        }
        if !(self.newton_switch > 0.0) {
            return invalid("newton_switch must be > 0");
        }
        Ok(())
    }

    pub(crate) fn init_scale(&self, prob: &Problem) -> f64 {
        self.init_scale.unwrap_or(prob.delta() / 8.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub state: SystemState,
    pub energy: f64,
    pub residual_sup: f64,
    /// `||u||_{m1,p1} + ||v||_{m2,p2}`.
    pub w_norm: f64,
    /// `max_x |(u(x), v(x))|`.
    pub sup_norm: f64,
    /// `sup_norm <= delta / 2`.
    pub transfers: bool,
    pub iterations: usize,
    pub converged: bool,
}

/// CSV with one row per result: summary columns, then the values of `u` and
/// `v` per vertex.
pub fn results_csv(prob: &Problem, results: &[SolveResult]) -> String {
    let names = prob.graph().names();
    let mut out = String::from("index,energy,w_norm,sup_norm,residual_sup,transfers,converged,iterations");
    for c in ["u", "v"] {
        for n in names {
            out.push_str(&format!(",{c}_{n}"));
        }
    }
    out.push('\n');
    for (i, r) in results.iter().enumerate() {
        out.push_str(&format!(
            "{i},{},{},{},{},{},{},{}",
            fmt17(r.energy),
            fmt17(r.w_norm),
            fmt17(r.sup_norm),
            fmt17(r.residual_sup),
            r.transfers,
            r.converged,
            r.iterations
        ));
        for v in r.state.u.values().iter().chain(r.state.v.values()) {
            out.push(',');
            out.push_str(&fmt17(*v));
        }
        out.push('\n');
    }
    out
}

/// Assembles a result from a flat state; `converged` means the sup residual
/// is within `tol`.
pub(crate) fn finish(prob: &Problem, x: &[f64], iterations: usize, tol: f64) -> SolveResult {
    let grad = prob.gradient_flat(x);
    let residual_sup = prob.residual_flat(&grad).sup;
    let sup_norm = prob.sup_pair_flat(x);
    SolveResult {
        state: prob.state(x),
        energy: prob.energy_flat(x),
        residual_sup,
        w_norm: prob.w_norm_flat(x),
        sup_norm,
        transfers: sup_norm <= 0.5 * prob.delta(),
        iterations,
        converged: residual_sup <= tol,
    }
}

/// `sum mu(x) a(x) b(x)` over both components.
pub(crate) fn mu_dot(prob: &Problem, a: &[f64], b: &[f64]) -> f64 {
    let mu = prob.graph().mu();
    let n = mu.len();
    a.iter().zip(b).enumerate().map(|(i, (x, y))| mu[i % n] * x * y).sum()
}

pub(crate) fn sup(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

pub(crate) fn axpy(x: &[f64], alpha: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(a, b)| a + alpha * b).collect()
}

/// Armijo backtracking along `-grad` from step 1, halving; coordinates that
/// would land exactly on 0 are nudged off it by `1e-15 * scale`.
/// Returns the accepted point, its energy and the step length.
pub(crate) fn armijo_step(
    prob: &Problem,
    x: &[f64],
    energy: f64,
    grad: &[f64],
    scale: f64,
) -> Option<(Vec<f64>, f64, f64)> {
    let slope = mu_dot(prob, grad, grad);
    if !(slope > 0.0) {
        return None;
    }
    let nudge = 1e-15 * scale.max(f64::MIN_POSITIVE);
    let mut alpha = 1.0;
    for _ in 0..80 {
        let mut trial = axpy(x, -alpha, grad);
        for (t, old) in trial.iter_mut().zip(x) {
            if *t == 0.0 && *old != 0.0 {
                *t = nudge.copysign(*old);
            }
        }
        let e = prob.energy_flat(&trial);
        if e.is_finite() && e <= energy - 1e-4 * alpha * slope {
            return Some((trial, e, alpha));
        }
        alpha *= 0.5;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SolveConfig::default().validate().is_ok());
        let bad = [
            SolveConfig {
                residual_tol: 0.0,
                ..Default::default()
            },
            SolveConfig {
                path_points: 2,
                ..Default::default()
            },
            SolveConfig {
                restarts: 0,
                ..Default::default()
            },
            SolveConfig {
                init_scale: Some(-1.0),
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err());
        }
        assert_eq!("minimize".parse::<Mode>().unwrap(), Mode::Minimize);
        assert!("gradient".parse::<Mode>().is_err());
    }
}
