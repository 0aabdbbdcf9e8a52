use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::energy::Problem;
use crate::error::Result;

use super::newton::newton_flat;
use super::{armijo_step, finish, sup, SolveConfig, SolveResult};

/// What happened in one restart of [`minimize_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct RestartOutcome {
    /// Energy after every accepted descent step, starting with the initial one.
    pub energy_trace: Vec<f64>,
    pub result: Option<SolveResult>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeReport {
    /// Distinct nontrivial converged critical points, by ascending energy.
    pub solutions: Vec<SolveResult>,
    pub restarts: Vec<RestartOutcome>,
}

const DIVERGED: f64 = -1e100;

fn descend(prob: &Problem, mut x: Vec<f64>, cfg: &SolveConfig, scale: f64) -> RestartOutcome {
    let tol = cfg.residual_tol;
    let mut energy = prob.energy_flat(&x);
    let mut trace = vec![energy];
    let mut switch = cfg.newton_switch.max(tol);
    let mut iters = 0;
    let fail = |trace, msg: String| RestartOutcome {
        energy_trace: trace,
        result: None,
        error: Some(msg),
    };
    loop {
        let grad = prob.gradient_flat(&x);
        if grad.iter().any(|g| !g.is_finite()) {
            return fail(trace, "gradient is not finite".into());
        }
        let res = sup(&grad);
        if res <= tol {
            break;
        }
        if res <= switch {
            let (nx, ok, steps) = newton_flat(prob, &x, tol);
            iters += steps;
            if ok {
                let e = prob.energy_flat(&nx);
                // Newton may climb slightly; it never enters the monotone trace
                log::debug!("newton polished residual {res:e} -> converged, energy {energy:e} -> {e:e}");
                x = nx;
                break;
            }
            switch = (0.1 * switch).max(tol);
        }
        if iters >= cfg.max_iters {
            break;
        }
        match armijo_step(prob, &x, energy, &grad, scale) {
            Some((nx, e, _)) => {
                x = nx;
                energy = e;
                trace.push(e);
                if e < DIVERGED {
                    return fail(trace, "energy is not bounded below".into());
                }
            }
            None => {
                let (nx, ok, steps) = newton_flat(prob, &x, tol);
                iters += steps;
                if ok {
                    x = nx;
                }
                break;
            }
        }
        iters += 1;
    }
    RestartOutcome {
        energy_trace: trace,
        result: Some(finish(prob, &x, iters, tol)),
        error: None,
    }
}

fn same(prob: &Problem, a: &[f64], b: &[f64], even: bool, dist: f64) -> bool {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    if prob.w_norm_flat(&diff) < dist {
        return true;
    }
    even && {
        let sum: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        prob.w_norm_flat(&sum) < dist
    }
}

/// Multi-start descent with full restart bookkeeping.
pub fn minimize_report(prob: &Problem, cfg: &SolveConfig) -> Result<MinimizeReport> {
    cfg.validate()?;
    let scale = cfg.init_scale(prob);
    let dim = 2 * prob.graph().len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut restarts = Vec::with_capacity(cfg.restarts);
    for _ in 0..cfg.restarts {
        let x0: Vec<f64> = (0..dim)
            .map(|_| if scale > 0.0 { rng.gen_range(-scale..=scale) } else { 0.0 })
            .collect();
        restarts.push(descend(prob, x0, cfg, scale));
    }
    let even = prob.nonlinearity().even;
    let mut solutions: Vec<SolveResult> = Vec::new();
    for r in restarts.iter().filter_map(|o| o.result.as_ref()) {
        if !r.converged || r.w_norm <= cfg.dedup_dist {
            continue;
        }
        let x = r.state.to_flat();
        if !solutions.iter().any(|s| same(prob, &s.state.to_flat(), &x, even, cfg.dedup_dist)) {
            solutions.push(r.clone());
        }
    }
    solutions.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(MinimizeReport { solutions, restarts })
}

/// Distinct nontrivial critical points found by seeded multi-start descent,
/// sorted by ascending energy.
pub fn minimize(prob: &Problem, cfg: &SolveConfig) -> Result<Vec<SolveResult>> {
    Ok(minimize_report(prob, cfg)?.solutions)
}
