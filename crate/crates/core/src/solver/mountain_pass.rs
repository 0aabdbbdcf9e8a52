use crate::energy::Problem;
use crate::error::{Error, Result};
use crate::graph::SystemState;
use crate::nonlinearity::Regime;

use super::newton::newton_flat;
use super::{armijo_step, finish, sup, SolveConfig, SolveResult};

/// Redistributes the interior points uniformly in `W`-arc length along the
/// piecewise-linear path; endpoints stay put.
fn reparametrize(prob: &Problem, path: &mut [Vec<f64>]) {
    let n = path.len();
    let mut cum = vec![0.0; n];
    for i in 1..n {
        let d: Vec<f64> = path[i].iter().zip(&path[i - 1]).map(|(a, b)| a - b).collect();
        cum[i] = cum[i - 1] + prob.w_norm_flat(&d);
    }
    let total = cum[n - 1];
    if !(total > 0.0) {
        return;
    }
    let old = path.to_vec();
    let mut seg = 0;
    for (k, point) in path.iter_mut().enumerate().take(n - 1).skip(1) {
        let target = total * k as f64 / (n - 1) as f64;
        while seg + 1 < n - 1 && cum[seg + 1] < target {
            seg += 1;
        }
        let len = cum[seg + 1] - cum[seg];
        let w = if len > 0.0 { ((target - cum[seg]) / len).clamp(0.0, 1.0) } else { 0.0 };
        for (j, v) in point.iter_mut().enumerate() {
            *v = (1.0 - w) * old[seg][j] + w * old[seg + 1][j];
        }
    }
}

fn argmax_interior(energies: &[f64]) -> usize {
    let mut best = 1;
    for i in 2..energies.len() - 1 {
        if energies[i] > energies[best] {
            best = i;
        }
    }
    best
}

/// Accepts a Newton-polished saddle candidate: positive energy, nontrivial.
fn acceptable(prob: &Problem, x: &[f64]) -> bool {
    prob.energy_flat(x) > 0.0 && prob.w_norm_flat(x) > 0.0
}

/// Mountain-pass critical point between `(0, 0)` and `anchor`.
///
/// The path starts as the segment from the origin to the anchor. Each
/// iteration moves the highest interior point one backtracking step down the
/// gradient and re-spaces the path; once the gradient at the top is small the
/// point is handed to Newton. Stagnation yields `converged = false`.
pub fn mountain_pass(prob: &Problem, anchor: &SystemState, cfg: &SolveConfig) -> Result<SolveResult> {
    cfg.validate()?;
    prob.check_state(anchor)?;
    if prob.nonlinearity().growth.regime != Regime::Superlinear {
        return Err(Error::Regime("mountain pass needs a superlinear problem".into()));
    }
    let end = anchor.to_flat();
    let e_end = prob.energy_flat(&end);
    if !(e_end < 0.0) {
        return Err(Error::AnchorEnergy(e_end));
    }
    let tol = cfg.residual_tol;
    let scale = sup(&end);
    let np = cfg.path_points;
    let mut path: Vec<Vec<f64>> = (0..np)
        .map(|k| {
            let t = k as f64 / (np - 1) as f64;
            end.iter().map(|v| t * v).collect()
        })
        .collect();
    let mut energies: Vec<f64> = path.iter().map(|x| prob.energy_flat(x)).collect();
    let mut switch = cfg.newton_switch.max(tol);
    let mut iters = 0;
    let mut top = argmax_interior(&energies);
    while iters < cfg.max_iters {
        top = argmax_interior(&energies);
        let grad = prob.checked_gradient_flat(&path[top])?;
        let res = sup(&grad);
        if res <= switch {
            let (x, ok, steps) = newton_flat(prob, &path[top], tol);
            iters += steps;
            if ok && acceptable(prob, &x) {
                return Ok(finish(prob, &x, iters, tol));
            }
            log::debug!("newton from path top failed at residual {res:e}");
            switch = (0.1 * switch).max(tol);
            if res <= tol {
                break;
            }
        }
        match armijo_step(prob, &path[top], energies[top], &grad, scale) {
            Some((x, e, _)) => {
                path[top] = x;
                energies[top] = e;
            }
            None => break,
        }
        reparametrize(prob, &mut path);
        for i in 1..np - 1 {
            energies[i] = prob.energy_flat(&path[i]);
        }
        iters += 1;
    }
    let mut r = finish(prob, &path[top], iters, tol);
    r.converged = r.converged && acceptable(prob, &path[top]);
    Ok(r)
}
