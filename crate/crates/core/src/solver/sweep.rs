use rayon::prelude::*;

use crate::bounds::{mp_level_bound, solution_norm_bounds, BoundsReport, NormBounds};
use crate::energy::Problem;
use crate::error::{invalid, Result};
use crate::fmt17;
use crate::graph::SystemState;

use super::{minimize, mountain_pass, Mode, SolveConfig, SolveResult};

pub const SWEEP_HEADER: &str =
    "lambda,energy,w_norm,sup_norm,residual_sup,mp_bound,b18_bound,b19_bound,b20_bound,b21_bound,transfers,converged";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    /// The solve outcome, or the error message of a failed row.
    pub result: std::result::Result<SolveResult, String>,
    pub mp_bound: Option<f64>,
    pub norm_bounds: Option<NormBounds>,
}

impl SweepRow {
    pub fn converged(&self) -> bool {
        matches!(&self.result, Ok(r) if r.converged)
    }

    /// `energy <= mp_bound`, `w_norm <= w_u + w_v` and
    /// `sup_norm <= sup_u + sup_v`; false when either side is missing.
    pub fn bound_conformant(&self) -> bool {
        match (&self.result, self.mp_bound, self.norm_bounds) {
            (Ok(r), Some(mp), Some(b)) => {
                let (u, v) = (&r.state.u, &r.state.v);
                let sup_u = crate::calculus::sup_norm(u);
                let sup_v = crate::calculus::sup_norm(v);
                r.converged
                    && r.energy > 0.0
                    && r.energy <= mp
                    && r.w_norm <= b.w_u + b.w_v
                    && sup_u <= b.sup_u
                    && sup_v <= b.sup_v
            }
            _ => false,
        }
    }

    fn csv_line(&self) -> String {
        let opt = |v: Option<f64>| v.map(fmt17).unwrap_or_else(|| fmt17(f64::NAN));
        let b = self.norm_bounds;
        let bounds = [
            self.mp_bound,
            b.map(|b| b.w_u),
            b.map(|b| b.w_v),
            b.map(|b| b.sup_u),
            b.map(|b| b.sup_v),
        ]
        .map(opt)
        .join(",");
        match &self.result {
            Ok(r) => format!(
                "{},{},{},{},{},{},{},{}",
                fmt17(self.lambda),
                fmt17(r.energy),
                fmt17(r.w_norm),
                fmt17(r.sup_norm),
                fmt17(r.residual_sup),
                bounds,
                r.transfers,
                r.converged
            ),
            Err(_) => {
                let nan = fmt17(f64::NAN);
                format!("{},{nan},{nan},{nan},{nan},{bounds},false,false", fmt17(self.lambda))
            }
        }
    }
}

fn solve_one(
    prob: &Problem,
    cfg: &SolveConfig,
    anchor: &(dyn Fn(&Problem) -> Result<SystemState> + Sync),
) -> Result<SolveResult> {
    match cfg.mode {
        Mode::MountainPass => mountain_pass(prob, &anchor(prob)?, cfg),
        Mode::Minimize => minimize(prob, cfg)?
            .into_iter()
            .next()
            .ok_or_else(|| crate::Error::InvalidParameter("no nontrivial critical point found".into())),
    }
}

/// Solves `template` independently at every `lambda` (rows run in parallel,
/// output in input order). Bound columns are filled when `report` is given.
/// `anchor` builds the mountain-pass anchor for each `lambda`.
pub fn sweep_lambda(
    template: &Problem,
    lambdas: &[f64],
    cfg: &SolveConfig,
    report: Option<&BoundsReport>,
    anchor: &(dyn Fn(&Problem) -> Result<SystemState> + Sync),
) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    if let Some(bad) = lambdas.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
        return invalid(format!("lambda must be > 0, got {bad}"));
    }
    if lambdas.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("lambda list must be strictly ascending");
    }
    Ok(lambdas
        .par_iter()
        .map(|&lambda| {
            let result = template
                .with_lambda(lambda)
                .and_then(|p| solve_one(&p, cfg, anchor))
                .map_err(|e| e.to_string());
            SweepRow {
                lambda,
                result,
                mp_bound: report.and_then(|r| mp_level_bound(r, lambda).ok()),
                norm_bounds: report.and_then(|r| solution_norm_bounds(r, lambda).ok()),
            }
        })
        .collect())
}

/// CSV table with [`SWEEP_HEADER`] and one line per row.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}
