//! The energy functional of the coupled system, its exact coordinate gradient
//! and the Euler-Lagrange residual.

use std::fmt;
use std::str::FromStr;

use crate::calculus::kernels;
use crate::error::{invalid, positive, Error, Result};
use crate::graph::{SystemState, VertexFunction, WeightedGraph};
use crate::nonlinearity::{modify_sublinear, modify_superlinear, NonlinearityDef, Regime};
use crate::signed_pow;

/// Left-hand-side data `(m1, p1, h1; m2, p2, h2; lambda)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub m1: usize,
    pub m2: usize,
    pub p1: f64,
    pub p2: f64,
    pub h1: VertexFunction,
    pub h2: VertexFunction,
    pub lambda: f64,
}

impl SystemParams {
    pub fn new(
        g: &WeightedGraph,
        (m1, p1, h1): (usize, f64, VertexFunction),
        (m2, p2, h2): (usize, f64, VertexFunction),
        lambda: f64,
    ) -> Result<Self> {
        let params = Self {
            m1,
            m2,
            p1,
            p2,
            h1,
            h2,
            lambda,
        };
        params.validate(g)?;
        Ok(params)
    }

    /// Same `m`, `p` and constant `h` for both components.
    pub fn symmetric(g: &WeightedGraph, m: usize, p: f64, h: f64, lambda: f64) -> Result<Self> {
        let h = VertexFunction::constant(g, h);
        Self::new(g, (m, p, h.clone()), (m, p, h), lambda)
    }

    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        for (i, (m, p, h)) in [(self.m1, self.p1, &self.h1), (self.m2, self.p2, &self.h2)]
            .into_iter()
            .enumerate()
        {
            if m < 1 {
                return invalid(format!("m{} must be >= 1", i + 1));
            }
            if !(p > 1.0 && p.is_finite()) {
                return invalid(format!("p{} must be > 1, got {p}", i + 1));
            }
            h.check(g)?;
            if let Some(&bad) = h.values().iter().find(|v| **v <= 0.0) {
                return Err(Error::NonPositive {
                    what: format!("h{}", i + 1),
                    value: bad,
                });
            }
        }
        positive("lambda", self.lambda)?;
        Ok(())
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        positive("lambda", lambda)?;
        Ok(Self {
            lambda,
            ..self.clone()
        })
    }

    pub fn p(&self) -> [f64; 2] {
        [self.p1, self.p2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Original,
    ModifiedSuperlinear,
    ModifiedSublinear,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "original" => Ok(Self::Original),
            "superlinear" => Ok(Self::ModifiedSuperlinear),
            "sublinear" => Ok(Self::ModifiedSublinear),
            other => invalid(format!("unknown variant `{other}`")),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Original => "original",
            Self::ModifiedSuperlinear => "superlinear",
            Self::ModifiedSublinear => "sublinear",
        })
    }
}

/// Graph, parameters and nonlinearity of one system.
///
/// `raw` is the nonlinearity as supplied; `f` is the one entering the
/// functional (the cut-off modification for the modified variants).
#[derive(Debug, Clone)]
pub struct Problem {
    graph: WeightedGraph,
    params: SystemParams,
    raw: NonlinearityDef,
    f: NonlinearityDef,
    variant: Variant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualNorms {
    pub sup: f64,
    pub l2: f64,
}

impl Problem {
    pub fn new(graph: WeightedGraph, params: SystemParams, raw: NonlinearityDef, variant: Variant) -> Result<Self> {
        params.validate(&graph)?;
        raw.growth.validate(params.p())?;
        let f = match variant {
            Variant::Original => {
                if !raw.global {
                    return Err(Error::NonDifferentiable(format!(
                        "`{}` is only defined near the origin; use a modified variant",
                        raw.name
                    )));
                }
                raw.clone()
            }
            Variant::ModifiedSuperlinear => modify_superlinear(&raw)?,
            Variant::ModifiedSublinear => modify_sublinear(&raw)?,
        };
        Ok(Self {
            graph,
            params,
            raw,
            f,
            variant,
        })
    }

    /// The modified variant matching the regime of `raw`.
    pub fn modified(graph: WeightedGraph, params: SystemParams, raw: NonlinearityDef) -> Result<Self> {
        let variant = match raw.growth.regime {
            Regime::Superlinear => Variant::ModifiedSuperlinear,
            Regime::Sublinear => Variant::ModifiedSublinear,
        };
        Self::new(graph, params, raw, variant)
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn raw_nonlinearity(&self) -> &NonlinearityDef {
        &self.raw
    }

    pub fn nonlinearity(&self) -> &NonlinearityDef {
        &self.f
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn delta(&self) -> f64 {
        self.raw.delta
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Ok(Self {
            params: self.params.with_lambda(lambda)?,
            ..self.clone()
        })
    }

    /// The same system with the unmodified nonlinearity.
    pub fn original(&self) -> Result<Self> {
        Self::new(self.graph.clone(), self.params.clone(), self.raw.clone(), Variant::Original)
    }

    fn split<'a>(&self, x: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        x.split_at(self.graph.len())
    }

    pub(crate) fn energy_flat(&self, x: &[f64]) -> f64 {
        let g = &self.graph;
        let p = &self.params;
        let (u, v) = self.split(x);
        let eu = kernels::grad_power_integral(g, p.m1, p.p1, u) + kernels::weighted_lp_power(g, p.p1, p.h1.values(), u);
        let ev = kernels::grad_power_integral(g, p.m2, p.p2, v) + kernels::weighted_lp_power(g, p.p2, p.h2.values(), v);
        eu / p.p1 + ev / p.p2 - p.lambda * self.f_integral(u, v)
    }

    fn f_integral(&self, u: &[f64], v: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (x, mu) in self.graph.mu().iter().enumerate() {
            acc += mu * self.f.value(x, u[x], v[x]);
        }
        acc
    }

    /// `(G_u, G_v)` flattened; `mu(x) G(x)` is the coordinate derivative.
    pub(crate) fn gradient_flat(&self, x: &[f64]) -> Vec<f64> {
        let g = &self.graph;
        let p = &self.params;
        let n = g.len();
        let (u, v) = self.split(x);
        let mut out = kernels::poly_laplacian(g, p.m1, p.p1, u);
        out.extend(kernels::poly_laplacian(g, p.m2, p.p2, v));
        let (h1, h2) = (p.h1.values(), p.h2.values());
        for i in 0..n {
            out[i] += h1[i] * signed_pow(u[i], p.p1) - p.lambda * self.f.d_t(i, u[i], v[i]);
            out[n + i] += h2[i] * signed_pow(v[i], p.p2) - p.lambda * self.f.d_s(i, u[i], v[i]);
        }
        out
    }

    pub(crate) fn checked_gradient_flat(&self, x: &[f64]) -> Result<Vec<f64>> {
        let grad = self.gradient_flat(x);
        match grad.iter().position(|g| !g.is_finite()) {
            Some(i) => Err(Error::NonDifferentiable(format!(
                "gradient is not finite at coordinate {i} (value {})",
                x[i]
            ))),
            None => Ok(grad),
        }
    }

    pub(crate) fn residual_flat(&self, grad: &[f64]) -> ResidualNorms {
        let n = self.graph.len();
        let mu = self.graph.mu();
        let mut sup = 0.0f64;
        let mut l2 = 0.0;
        for (i, gi) in grad.iter().enumerate() {
            sup = sup.max(gi.abs());
            l2 += mu[i % n] * gi * gi;
        }
        ResidualNorms { sup, l2: l2.sqrt() }
    }

    /// `||u||_{m1,p1} + ||v||_{m2,p2}`.
    pub(crate) fn w_norm_flat(&self, x: &[f64]) -> f64 {
        let (u, v) = self.split(x);
        let g = &self.graph;
        let p = &self.params;
        crate::calculus::sobolev_norm_raw(g, p.m1, p.p1, p.h1.values(), u)
            + crate::calculus::sobolev_norm_raw(g, p.m2, p.p2, p.h2.values(), v)
    }

    pub(crate) fn sup_pair_flat(&self, x: &[f64]) -> f64 {
        let (u, v) = self.split(x);
        u.iter().zip(v).map(|(a, b)| a.hypot(*b)).fold(0.0, f64::max)
    }

    pub(crate) fn state(&self, x: &[f64]) -> SystemState {
        SystemState::from_flat(self.graph.id(), x)
    }

    pub(crate) fn check_state(&self, s: &SystemState) -> Result<()> {
        s.check(&self.graph)
    }
}

/// `(1/p1)||u||^p1 + (1/p2)||v||^p2 - lambda * integral of F(x,u,v)`.
pub fn eval_energy(prob: &Problem, state: &SystemState) -> Result<f64> {
    prob.check_state(state)?;
    Ok(prob.energy_flat(&state.to_flat()))
}

/// Coordinate gradient divided by the measure:
/// `G_u = L_{m1,p1} u + h1 |u|^(p1-2) u - lambda F_t(x,u,v)`, likewise `G_v`.
pub fn gradient(prob: &Problem, state: &SystemState) -> Result<SystemState> {
    prob.check_state(state)?;
    let grad = prob.checked_gradient_flat(&state.to_flat())?;
    Ok(prob.state(&grad))
}

pub fn residual_norms(prob: &Problem, state: &SystemState) -> Result<ResidualNorms> {
    prob.check_state(state)?;
    let grad = prob.checked_gradient_flat(&state.to_flat())?;
    Ok(prob.residual_flat(&grad))
}

/// Whether a solution of the modified system also solves the original one:
/// `max_x |(u(x), v(x))| <= delta / 2`.
pub fn transfers_to_original(state: &SystemState, delta: f64) -> bool {
    crate::calculus::sup_norm_pair(state) <= 0.5 * delta
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinearity::{builtin_example51, builtin_example52};
    use approx::assert_relative_eq;

    fn path3() -> WeightedGraph {
        WeightedGraph::from_indices(&[1.0, 2.0, 0.5], &[(0, 1, 1.0), (1, 2, 3.0)]).unwrap()
    }

    #[test]
    fn zero_state_is_critical() {
        let g = path3();
        let params = SystemParams::symmetric(&g, 1, 2.0, 1.0, 10.0).unwrap();
        let prob = Problem::modified(g.clone(), params, builtin_example51()).unwrap();
        let z = SystemState::zeros(&g);
        assert_eq!(eval_energy(&prob, &z).unwrap(), 0.0);
        let r = residual_norms(&prob, &z).unwrap();
        assert_eq!((r.sup, r.l2), (0.0, 0.0));
    }

    #[test]
    fn graph_mismatch_rejected() {
        let g = path3();
        let other = path3();
        let params = SystemParams::symmetric(&g, 1, 2.0, 1.0, 1.0).unwrap();
        let prob = Problem::modified(g, params, builtin_example51()).unwrap();
        assert_eq!(eval_energy(&prob, &SystemState::zeros(&other)), Err(Error::GraphMismatch));
    }

    #[test]
    fn params_validation() {
        let g = path3();
        assert!(SystemParams::symmetric(&g, 0, 2.0, 1.0, 1.0).is_err());
        assert!(SystemParams::symmetric(&g, 1, 1.0, 1.0, 1.0).is_err());
        assert!(SystemParams::symmetric(&g, 1, 2.0, 0.0, 1.0).is_err());
        assert!(SystemParams::symmetric(&g, 1, 2.0, 1.0, -1.0).is_err());
        // superlinear metadata needs q > p: p = 8 breaks it
        let params = SystemParams::symmetric(&g, 1, 8.0, 1.0, 1.0).unwrap();
        assert!(Problem::modified(g.clone(), params, builtin_example51()).is_err());
        let params = SystemParams::symmetric(&g, 1, 2.0, 1.0, 1.0).unwrap();
        assert!(Problem::new(g, params, builtin_example52(), Variant::ModifiedSuperlinear).is_err());
        assert_eq!("sublinear".parse::<Variant>().unwrap(), Variant::ModifiedSublinear);
        assert!("other".parse::<Variant>().is_err());
    }

    #[test]
    fn transfer_threshold() {
        let g = path3();
        let u = VertexFunction::new(&g, vec![0.4, 0.0, 0.0]).unwrap();
        let s = SystemState::new(u, VertexFunction::zeros(&g)).unwrap();
        assert!(transfers_to_original(&s, 1.0));
        let u = VertexFunction::new(&g, vec![0.0, 0.36, 0.0]).unwrap();
        let v = VertexFunction::new(&g, vec![0.0, 0.48, 0.0]).unwrap();
        assert!(!transfers_to_original(&SystemState::new(u, v).unwrap(), 1.0));
    }

    #[test]
    fn single_vertex_energy_is_linear_in_measure() {
        let g1 = WeightedGraph::from_indices(&[1.0], &[]).unwrap();
        let g2 = g1.scale_measure(2.0).unwrap();
        let f = builtin_example52();
        let e = |g: &WeightedGraph| {
            let params = SystemParams::symmetric(g, 1, 2.0, 1.0, 1.0).unwrap();
            let prob = Problem::new(g.clone(), params, f.clone(), Variant::ModifiedSublinear).unwrap();
            let s = SystemState::new(
                VertexFunction::constant(g, 0.3),
                VertexFunction::constant(g, -0.2),
            )
            .unwrap();
            eval_energy(&prob, &s).unwrap()
        };
        assert_relative_eq!(e(&g2), 2.0 * e(&g1), max_relative = 1e-15);
    }
}
