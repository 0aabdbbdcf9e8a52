use crate::energy::Problem;
use crate::error::Result;
use crate::graph::SystemState;

use super::{axpy, finish, mu_dot, sup, SolveConfig, SolveResult};

const MAX_NEWTON: usize = 50;

/// Central-difference directional derivative of the gradient map.
fn jvp(prob: &Problem, x: &[f64], v: &[f64]) -> Vec<f64> {
    let vn = sup(v);
    if vn == 0.0 {
        return vec![0.0; x.len()];
    }
    let eps = 1e-7 * (1.0 + sup(x)) / vn;
    let gp = prob.gradient_flat(&axpy(x, eps, v));
    let gm = prob.gradient_flat(&axpy(x, -eps, v));
    gp.iter().zip(&gm).map(|(a, b)| (a - b) / (2.0 * eps)).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Unrestarted GMRES for `A d = b` with `A` given by `apply`.
/// Returns `None` on breakdown without progress or non-finite values.
fn gmres(apply: impl Fn(&[f64]) -> Vec<f64>, b: &[f64], rel_tol: f64, max_dim: usize) -> Option<Vec<f64>> {
    let n = b.len();
    let beta = norm(b);
    if beta == 0.0 {
        return Some(vec![0.0; n]);
    }
    let mut basis: Vec<Vec<f64>> = vec![b.iter().map(|x| x / beta).collect()];
    // Hessenberg columns after Givens rotations
    let mut r: Vec<Vec<f64>> = Vec::new();
    let mut cs: Vec<(f64, f64)> = Vec::new();
    let mut rhs = vec![beta];
    for j in 0..max_dim {
        let mut w = apply(&basis[j]);
        let mut h = Vec::with_capacity(j + 2);
        for q in &basis {
            let hij = dot(&w, q);
            w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= hij * qi);
            h.push(hij);
        }
        let hn = norm(&w);
        h.push(hn);
        for (i, &(c, s)) in cs.iter().enumerate() {
            let (a, b) = (h[i], h[i + 1]);
            h[i] = c * a + s * b;
            h[i + 1] = -s * a + c * b;
        }
        let (a, b) = (h[j], h[j + 1]);
        let d = a.hypot(b);
        if !d.is_finite() || d == 0.0 {
            return None;
        }
        let (c, s) = (a / d, b / d);
        h[j] = d;
        h[j + 1] = 0.0;
        cs.push((c, s));
        rhs.push(-s * rhs[j]);
        rhs[j] *= c;
        r.push(h);
        let done = rhs[j + 1].abs() <= rel_tol * beta || hn <= 1e-300;
        if done || j + 1 == max_dim {
            let k = j + 1;
            let mut y = vec![0.0; k];
            for i in (0..k).rev() {
                let mut acc = rhs[i];
                for (l, yl) in y.iter().enumerate().skip(i + 1) {
                    acc -= r[l][i] * yl;
                }
                y[i] = acc / r[i][i];
            }
            let mut d = vec![0.0; n];
            for (yi, q) in y.iter().zip(&basis) {
                d.iter_mut().zip(q).for_each(|(di, qi)| *di += yi * qi);
            }
            return d.iter().all(|v| v.is_finite()).then_some(d);
        }
        basis.push(w.iter().map(|x| x / hn).collect());
    }
    None
}

/// Damped Newton iterations on the flat gradient map. Returns the best
/// iterate, whether its sup residual is `<= tol`, and the step count.
pub(crate) fn newton_flat(prob: &Problem, x0: &[f64], tol: f64) -> (Vec<f64>, bool, usize) {
    let mut x = x0.to_vec();
    let mut g = prob.gradient_flat(&x);
    if sup(&g) <= tol {
        return (x, true, 0);
    }
    let merit = |g: &[f64]| mu_dot(prob, g, g).sqrt();
    let mut m = merit(&g);
    let target = 1e-3 * tol;
    let mut steps = 0;
    for _ in 0..MAX_NEWTON {
        if sup(&g) <= target {
            break;
        }
        let neg: Vec<f64> = g.iter().map(|v| -v).collect();
        let Some(d) = gmres(|v| jvp(prob, &x, v), &neg, 1e-12, x.len()) else {
            break;
        };
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let trial = axpy(&x, alpha, &d);
            let tg = prob.gradient_flat(&trial);
            let tm = merit(&tg);
            if tm.is_finite() && tm < (1.0 - 1e-4 * alpha) * m {
                accepted = Some((trial, tg, tm));
                break;
            }
            alpha *= 0.5;
        }
        let Some((nx, ng, nm)) = accepted else { break };
        x = nx;
        g = ng;
        m = nm;
        steps += 1;
    }
    let ok = sup(&g) <= tol;
    (x, ok, steps)
}

/// Polishes `state` to a zero of the gradient. A state already within
/// tolerance is returned unchanged; a failed refinement returns the input
/// with `converged = false`.
pub fn newton_refine(prob: &Problem, state: &SystemState, cfg: &SolveConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let x0 = {
        prob.check_state(state)?;
        state.to_flat()
    };
    prob.checked_gradient_flat(&x0)?;
    let (x, ok, steps) = newton_flat(prob, &x0, cfg.residual_tol);
    if ok {
        Ok(finish(prob, &x, steps, cfg.residual_tol))
    } else {
        let mut r = finish(prob, &x0, steps, cfg.residual_tol);
        r.converged = false;
        Ok(r)
    }
}
