//! Reproduction of the two worked examples that ship as built-in fixtures.

use polylap::bounds::{compute_bounds, mp_level_bound, solution_norm_bounds, BaselinePair, Lambda5};
use polylap::calculus::sup_norm;
use polylap::energy::residual_norms;
use polylap::fmt17;
use polylap::problem::{example51_direct_baseline, example51_problem, example52_problem, indicator_anchor};
use polylap::solver::{minimize, mountain_pass, Mode, SolveConfig};

use crate::Failure;

/// Collects named checks and remembers the first one that failed.
#[derive(Default)]
struct Table {
    first_failure: Option<String>,
    not_converged: bool,
}

impl Table {
    fn check(&mut self, name: &str, got: &str, want: &str, ok: bool) {
        println!("{:<34} {:>26} {:>30}  {}", name, got, want, if ok { "PASS" } else { "FAIL" });
        if !ok && self.first_failure.is_none() {
            self.first_failure = Some(name.to_string());
        }
    }

    fn rel(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        let err = (got - want).abs() / want.abs();
        self.check(name, &fmt17(got), &format!("{} (rel {tol:.0e})", fmt17(want)), err <= tol);
    }

    fn at_most(&mut self, name: &str, got: f64, bound: f64) {
        self.check(name, &fmt17(got), &format!("<= {}", fmt17(bound)), got <= bound);
    }

    fn finish(self) -> Result<(), Failure> {
        match self.first_failure {
            None => {
                println!("result: PASS");
                Ok(())
            }
            Some(name) => {
                println!("result: FAIL");
                let msg = format!("first failing check: {name}");
                Err(if self.not_converged {
                    Failure::NotConverged(msg)
                } else {
                    Failure::Invalid(msg)
                })
            }
        }
    }
}

pub fn example51() -> Result<(), Failure> {
    let lambda = 1e8;
    let prob = example51_problem(lambda)?;
    let f = prob.raw_nonlinearity();
    let rep = compute_bounds(prob.graph(), prob.params(), &f.growth, f.delta, &example51_direct_baseline())?;
    let mut t = Table::default();

    println!("superlinear example: thresholds with direct baseline norms (15/68, 1/34)");
    let l1 = 5.0 / 168.0;
    t.rel("Lambda1 = 5/168", rep.lambda1, l1, 1e-12);
    t.rel("Lambda2 = Lambda1 6^-3 34^(3/2)", rep.lambda2, l1 * 6f64.powi(-3) * 34f64.powf(1.5), 1e-12);
    t.rel("Lambda3 = Lambda1 3^-3 34^(3/2)", rep.lambda3, l1 * 3f64.powi(-3) * 34f64.powf(1.5), 1e-12);
    let c = 62.5 * (17.0f64 / 14.0).powf(1.4);
    t.rel("C1* = (125/2)(17/14)^(7/5)", rep.c1_star, c, 1e-12);
    t.rel("C2* = (125/2)(17/14)^(7/5)", rep.c2_star, c, 1e-12);
    t.rel("Lambda4", rep.lambda4, 89523333.3, 1e-4);
    match &rep.lambda5 {
        Lambda5::Undefined { denominator, term, .. } => {
            t.check("Lambda5 undefined (denominator < 0)", &fmt17(*denominator), "< 0", *denominator < 0.0);
            println!("  offending term: {term}");
            println!("  lambda* = {} is a lower estimate (Lambda5 left out)", fmt17(rep.lambda_star));
        }
        Lambda5::Defined(v) => t.check("Lambda5 undefined (denominator < 0)", &fmt17(*v), "undefined", false),
    }

    // The baseline gradient norm quoted with the example does not match the
    // fixture graph; show both so the choice of the direct values is visible.
    let anchor = indicator_anchor(&prob)?;
    let computed = BaselinePair::from_graph(prob.graph(), prob.params(), &anchor)?;
    println!(
        "  note: gradient norm of the anchor on the graph is {} (direct input uses {})",
        fmt17(computed.u0_grad_p1),
        fmt17(15.0 / 68.0)
    );

    println!("mountain pass at lambda = {}", fmt17(lambda));
    let cfg = SolveConfig::default();
    let res = mountain_pass(&prob, &anchor, &cfg)?;
    let mp = mp_level_bound(&rep, lambda)?;
    let nb = solution_norm_bounds(&rep, lambda)?;
    t.not_converged = !res.converged;
    t.at_most("residual_sup", res.residual_sup, cfg.residual_tol);
    t.check("energy > 0", &fmt17(res.energy), "> 0", res.energy > 0.0);
    t.at_most("energy <= mountain-pass bound", res.energy, mp);
    t.at_most("w_norm <= norm bounds", res.w_norm, nb.w_u + nb.w_v);
    t.at_most("sup |u| bound", sup_norm(&res.state.u), nb.sup_u);
    t.at_most("sup |v| bound", sup_norm(&res.state.v), nb.sup_v);
    t.at_most("sup pair <= delta/2 (transfer)", res.sup_norm, 0.5 * prob.delta());
    let orig = residual_norms(&prob.original()?, &res.state)?.sup;
    t.at_most("original-system residual", orig, cfg.residual_tol);
    t.finish()
}

pub fn example52() -> Result<(), Failure> {
    let lambda = 1.0;
    let prob = example52_problem(lambda)?;
    let cfg = SolveConfig {
        mode: Mode::Minimize,
        seed: 7,
        ..Default::default()
    };
    println!("sublinear example: minimize at lambda = 1, {} restarts, seed {}", cfg.restarts, cfg.seed);
    let sols = minimize(&prob, &cfg)?;
    let original = prob.original()?;
    let mut t = Table::default();
    let mut good = 0;
    for (i, s) in sols.iter().enumerate() {
        println!(
            "  #{i:<2} energy {} residual {:.2e} w_norm {} sup {}",
            fmt17(s.energy),
            s.residual_sup,
            fmt17(s.w_norm),
            fmt17(s.sup_norm)
        );
        if s.energy < 0.0 && s.residual_sup < cfg.residual_tol {
            good += 1;
        }
        if s.sup_norm <= 0.5 * prob.delta() {
            let r = residual_norms(&original, &s.state)?.sup;
            t.at_most(&format!("#{i} original-system residual"), r, cfg.residual_tol);
        }
    }
    t.not_converged = good < 3;
    t.check(
        "distinct negative-energy solutions",
        &good.to_string(),
        ">= 3",
        good >= 3,
    );
    t.finish()
}
