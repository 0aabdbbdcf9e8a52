//! Closed-form parameter thresholds, mountain-pass level bounds and a-priori
//! solution bounds for the superlinear system, plus the sublinear radius.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::kernels;
use crate::energy::SystemParams;
use crate::error::{invalid, positive, Error, Result};
use crate::graph::{SystemState, VertexFunction, WeightedGraph};
use crate::nonlinearity::{GrowthMeta, Regime};
use crate::{fmt17, pow, signed_pow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineSource {
    Computed,
    Direct,
}

/// Norm data of the anchor pair `(u0, v0)`:
/// `||grad^m1 u0||^p1`, `||u0||^p1` in `L^p1`, and the same for `v0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselinePair {
    pub u0_grad_p1: f64,
    pub u0_lp1: f64,
    pub v0_grad_p2: f64,
    pub v0_lp2: f64,
    pub source: BaselineSource,
}

impl BaselinePair {
    pub fn direct(u0_grad_p1: f64, u0_lp1: f64, v0_grad_p2: f64, v0_lp2: f64) -> Result<Self> {
        let b = Self {
            u0_grad_p1,
            u0_lp1,
            v0_grad_p2,
            v0_lp2,
            source: BaselineSource::Direct,
        };
        b.validate()?;
        Ok(b)
    }

    /// Evaluates the four norms of `anchor` with the calculus operators.
    pub fn from_graph(g: &WeightedGraph, params: &SystemParams, anchor: &SystemState) -> Result<Self> {
        anchor.check(g)?;
        let (u, v) = (anchor.u.values(), anchor.v.values());
        let b = Self {
            u0_grad_p1: kernels::grad_power_integral(g, params.m1, params.p1, u),
            u0_lp1: kernels::lp_power(g, params.p1, u),
            v0_grad_p2: kernels::grad_power_integral(g, params.m2, params.p2, v),
            v0_lp2: kernels::lp_power(g, params.p2, v),
            source: BaselineSource::Computed,
        };
        b.validate()?;
        Ok(b)
    }

    fn validate(&self) -> Result<()> {
        for (what, v) in [("u0 gradient norm", self.u0_grad_p1), ("v0 gradient norm", self.v0_grad_p2)] {
            if !(v >= 0.0 && v.is_finite()) {
                return invalid(format!("{what} must be >= 0, got {v}"));
            }
        }
        positive("u0 L^p1 norm", self.u0_lp1)?;
        positive("v0 L^p2 norm", self.v0_lp2)?;
        Ok(())
    }
}

/// The fifth threshold, which only exists when both inner denominators are
/// positive.
#[derive(Debug, Clone, PartialEq)]
pub enum Lambda5 {
    Defined(f64),
    Undefined {
        /// 1 or 2: the component whose denominator is not positive.
        component: usize,
        denominator: f64,
        term: String,
    },
}

impl Lambda5 {
    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Defined(v) => Some(*v),
            Self::Undefined { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub lambda4: f64,
    pub lambda5: Lambda5,
    pub c1_star: f64,
    pub c2_star: f64,
    /// Max of the defined thresholds.
    pub lambda_star: f64,
    /// True when some threshold was undefined and left out of `lambda_star`.
    pub lambda_star_partial: bool,
    pub theta: [f64; 2],
    pub m5: f64,
    pub m6: f64,
    p: [f64; 2],
    q: [f64; 2],
    k: [f64; 2],
    mu_inf: f64,
    h_inf: [f64; 2],
    growth_sum: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuEta {
    pub nu0: f64,
    pub nu: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBounds {
    pub w_u: f64,
    pub w_v: f64,
    pub sup_u: f64,
    pub sup_v: f64,
}

fn min_max(h: &VertexFunction) -> (f64, f64) {
    (h.min(), h.max())
}

/// Evaluates the thresholds `Lambda_1..Lambda_5`, `C_{1,*}`, `C_{2,*}` and
/// `lambda_*` for the superlinear system.
pub fn compute_bounds(
    g: &WeightedGraph,
    params: &SystemParams,
    growth: &GrowthMeta,
    delta: f64,
    base: &BaselinePair,
) -> Result<BoundsReport> {
    if growth.regime != Regime::Superlinear {
        return Err(Error::Regime("thresholds need superlinear metadata".into()));
    }
    params.validate(g)?;
    growth.validate(params.p())?;
    positive("delta", delta)?;
    base.validate()?;

    let p = params.p();
    let (q, k) = (growth.q, growth.k);
    let [m1, m2, ..] = growth.coeffs;
    let (m5, m6) = (growth.c5(), growth.c6());
    let theta = growth.theta()?;
    let mu_inf = g.mu_min();
    let total = g.total_measure();
    let (h1_inf, h1_sup) = min_max(&params.h1);
    let (h2_inf, h2_sup) = min_max(&params.h2);
    let pmax = p[0].max(p[1]);
    let kmin = k[0].min(k[1]);

    let growth_sum = m5 / (pow(mu_inf, (k[0] - p[0]) / p[0]) * pow(h1_inf, k[0] / p[0]))
        + m6 / (pow(mu_inf, (k[1] - p[1]) / p[1]) * pow(h2_inf, k[1] / p[1]));
    let lambda1 = pow(2.0, 1.0 - pmax) / pmax / growth_sum;

    let u0_norm = base.u0_lp1.powf(1.0 / p[0]);
    let v0_norm = base.v0_lp2.powf(1.0 / p[1]);
    let lambda2 = lambda1 * pow(6.0 * h1_inf.powf(1.0 / p[0]) * u0_norm, pmax - kmin);
    let lambda3 = lambda1 * pow(3.0 * h2_inf.powf(1.0 / p[1]) * v0_norm, pmax - kmin);

    let full_u = base.u0_grad_p1 + base.u0_lp1;
    let full_v = base.v0_grad_p2 + base.v0_lp2;
    let num = h1_sup.max(1.0) * full_u / p[0] + h2_sup.max(1.0) * full_v / p[1];
    let den = m1 * pow(u0_norm, q[0]) * pow(total, 1.0 - q[0] / p[0])
        + m2 * pow(v0_norm, q[1]) * pow(total, 1.0 - q[1] / p[1]);
    let lambda4 = num / den;

    let c_star = |pi: f64, qi: f64, mi: f64, h_sup: f64, full: f64, norm: f64| {
        (qi - pi) * total / pi
            * (pow(h_sup.max(1.0), qi) / (pow(qi, qi) * pow(mi, pi))).powf(1.0 / (qi - pi))
            * (full.powf(1.0 / pi) / norm).powf(pi * qi / (qi - pi))
    };
    let c1_star = c_star(p[0], q[0], m1, h1_sup, full_u, u0_norm);
    let c2_star = c_star(p[1], q[1], m2, h2_sup, full_v, v0_norm);
    let cmax = c1_star.max(c2_star);

    let expo = 1.0 / (p[0] / (q[0] - p[0])).max(p[1] / (q[1] - p[1]));
    let mut lambda5 = Lambda5::Defined(f64::NEG_INFINITY);
    for (i, h_inf) in [h1_inf, h2_inf].into_iter().enumerate() {
        let a = pow(2.0, 2.0 * p[i] + 1.0) * p[i] * theta[i] * cmax;
        let d = pow(delta, p[i]) * (theta[i] - p[i]) * mu_inf * h_inf - a;
        if d <= 0.0 {
            lambda5 = Lambda5::Undefined {
                component: i + 1,
                denominator: d,
                term: format!(
                    "delta^p{0} (theta{0} - p{0}) mu_inf h{0}_inf - 2^(2 p{0} + 1) p{0} theta{0} max C* = {1}",
                    i + 1,
                    fmt17(d)
                ),
            };
            break;
        }
        if let Lambda5::Defined(cur) = lambda5 {
            lambda5 = Lambda5::Defined(cur.max((a / d).powf(expo)));
        }
    }

    let mut lambda_star = lambda1.max(lambda2).max(lambda3).max(lambda4);
    let lambda_star_partial = match lambda5.value() {
        Some(l5) => {
            lambda_star = lambda_star.max(l5);
            false
        }
        None => true,
    };

    Ok(BoundsReport {
        lambda1,
        lambda2,
        lambda3,
        lambda4,
        lambda5,
        c1_star,
        c2_star,
        lambda_star,
        lambda_star_partial,
        theta,
        m5,
        m6,
        p,
        q,
        k,
        mu_inf,
        h_inf: [h1_inf, h2_inf],
        growth_sum,
    })
}

impl BoundsReport {
    pub fn c_max(&self) -> f64 {
        self.c1_star.max(self.c2_star)
    }

    /// `lambda^(-p1/(q1-p1)) + lambda^(-p2/(q2-p2))`.
    fn decay(&self, lambda: f64) -> f64 {
        let [p1, p2] = self.p;
        let [q1, q2] = self.q;
        lambda.powf(-p1 / (q1 - p1)) + lambda.powf(-p2 / (q2 - p2))
    }

    /// Rows `(name, value, defined)` in display order.
    pub fn rows(&self) -> Vec<(&'static str, f64, bool)> {
        let l5 = self.lambda5.value();
        vec![
            ("Lambda1", self.lambda1, true),
            ("Lambda2", self.lambda2, true),
            ("Lambda3", self.lambda3, true),
            ("Lambda4", self.lambda4, true),
            ("Lambda5", l5.unwrap_or(f64::NAN), l5.is_some()),
            ("C1*", self.c1_star, true),
            ("C2*", self.c2_star, true),
            ("lambda*", self.lambda_star, !self.lambda_star_partial),
            ("theta1", self.theta[0], true),
            ("theta2", self.theta[1], true),
            ("M5", self.m5, true),
            ("M6", self.m6, true),
        ]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,value,defined\n");
        for (name, value, defined) in self.rows() {
            let value = if defined || value.is_finite() { fmt17(value) } else { String::new() };
            out.push_str(&format!("{name},{value},{defined}\n"));
        }
        out
    }
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, value, defined) in self.rows() {
            match (name, defined) {
                ("Lambda5", false) => writeln!(f, "{name:<8} undefined")?,
                ("lambda*", false) => writeln!(f, "{name:<8} {:>24}  (partial: Lambda5 undefined)", fmt17(value))?,
                _ => writeln!(f, "{name:<8} {:>24}", fmt17(value))?,
            }
        }
        if let Lambda5::Undefined { term, .. } = &self.lambda5 {
            writeln!(f, "Lambda5 has a non-positive inner denominator: {term}")?;
        }
        Ok(())
    }
}

/// `nu_{0,lambda}`, `nu = nu_{0,lambda} / 2` and the mountain-pass height
/// `eta` at radius `nu`.
pub fn nu0_eta(report: &BoundsReport, lambda: f64) -> Result<NuEta> {
    positive("lambda", lambda)?;
    let pmax = report.p[0].max(report.p[1]);
    let kmin = report.k[0].min(report.k[1]);
    let nu0 = (report.lambda1 / lambda).powf(1.0 / (kmin - pmax));
    let nu = 0.5 * nu0;
    let eta = pow(2.0, 1.0 - pmax) / pmax * nu.powf(pmax) - lambda * report.growth_sum * nu.powf(kmin);
    Ok(NuEta { nu0, nu, eta })
}

/// Upper bound on the mountain-pass level:
/// `max(C1*, C2*) (lambda^(-p1/(q1-p1)) + lambda^(-p2/(q2-p2)))`.
pub fn mp_level_bound(report: &BoundsReport, lambda: f64) -> Result<f64> {
    positive("lambda", lambda)?;
    Ok(report.c_max() * report.decay(lambda))
}

/// A-priori bounds on `||u||_{m1,p1}`, `||v||_{m2,p2}`, `||u||_inf` and
/// `||v||_inf` of the mountain-pass solution.
pub fn solution_norm_bounds(report: &BoundsReport, lambda: f64) -> Result<NormBounds> {
    positive("lambda", lambda)?;
    let [p1, p2] = report.p;
    let [t1, t2] = report.theta;
    if t1 <= p1 || t2 <= p2 {
        return invalid("theta_i must exceed p_i");
    }
    let c = report.c_max();
    let d = report.decay(lambda);
    let w_u = (p1 * t1 * c / (t1 - p1)).powf(1.0 / p1) * d.powf(1.0 / p1);
    let w_v = (p2 * t2 * c / (t2 - p2)).powf(1.0 / p2) * d.powf(1.0 / p2);
    let sup_u = (p1 * t1 * c / ((t1 - p1) * report.mu_inf * report.h_inf[0])).powf(1.0 / p1) * d.powf(1.0 / p1);
    let sup_v = (p2 * t2 * c / ((t2 - p2) * report.mu_inf * report.h_inf[1])).powf(1.0 / p2) * d.powf(1.0 / p2);
    Ok(NormBounds { w_u, w_v, sup_u, sup_v })
}

/// Radius below which the sublinear functional is negative on the sphere:
/// `(p1 p2/(p1+p2) lambda min(K1 c1, K2 c2) 2^(1-max q))^(1/(min p - max q))`.
pub fn rho_lambda(params: &SystemParams, growth: &GrowthMeta, c1: f64, c2: f64, lambda: f64) -> Result<f64> {
    if growth.regime != Regime::Sublinear {
        return Err(Error::Regime("rho_lambda needs sublinear metadata".into()));
    }
    positive("c1", c1)?;
    positive("c2", c2)?;
    positive("lambda", lambda)?;
    growth.validate(params.p())?;
    let (p1, p2) = (params.p1, params.p2);
    let qmax = growth.q[0].max(growth.q[1]);
    let base = p1 * p2 / (p1 + p2) * lambda * (growth.coeffs[0] * c1).min(growth.coeffs[1] * c2) * pow(2.0, 1.0 - qmax);
    Ok(base.powf(1.0 / (p1.min(p2) - qmax)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSumBound {
    pub lhs: f64,
    pub rhs: f64,
}

/// Both sides of `lambda^-a + lambda^-b <= 2 (1 + lambda^-max(a,b))`.
pub fn power_sum_inequality(lambda: f64, a: f64, b: f64) -> Result<PowerSumBound> {
    positive("lambda", lambda)?;
    positive("a", a)?;
    positive("b", b)?;
    Ok(PowerSumBound {
        lhs: lambda.powf(-a) + lambda.powf(-b),
        rhs: 2.0 * (1.0 + lambda.powf(-a.max(b))),
    })
}

/// `||u||_q^q / ||u||_{m,p}^q` and its gradient.
fn ratio_and_grad(g: &WeightedGraph, m: usize, p: f64, h: &[f64], q: f64, u: &[f64]) -> (f64, Vec<f64>) {
    let mu = g.mu();
    let a = kernels::lp_power(g, q, u);
    let b = kernels::grad_power_integral(g, m, p, u) + kernels::weighted_lp_power(g, p, h, u);
    let lap = kernels::poly_laplacian(g, m, p, u);
    let bq = b.powf(q / p);
    let grad = (0..u.len())
        .map(|i| {
            let da = q * mu[i] * signed_pow(u[i], q);
            let db = p * mu[i] * (lap[i] + h[i] * signed_pow(u[i], p));
            da / bq - (q / p) * a / (bq * b) * db
        })
        .collect();
    (a / bq, grad)
}

fn normalise(g: &WeightedGraph, m: usize, p: f64, h: &[f64], u: &mut [f64]) -> bool {
    let n = crate::calculus::sobolev_norm_raw(g, m, p, h, u);
    if !(n > 0.0 && n.is_finite()) {
        return false;
    }
    u.iter_mut().for_each(|x| *x /= n);
    true
}

/// Numerical estimate of `min { ||u||_q^q : ||u||_{m,p} = 1 }` by projected
/// descent from `restarts` starting points (vertex indicators first, then
/// seeded random states). The result is the best value found, so it can
/// only over-estimate the true constant.
pub fn norm_equivalence_estimate(
    g: &WeightedGraph,
    m: usize,
    p: f64,
    h: &VertexFunction,
    q: f64,
    restarts: usize,
) -> Result<f64> {
    if restarts == 0 {
        return invalid("restarts must be >= 1");
    }
    if m < 1 || !(p > 1.0) || !(q >= 1.0) {
        return invalid("need m >= 1, p > 1, q >= 1");
    }
    h.check(g)?;
    if h.min() <= 0.0 {
        return Err(Error::NonPositive {
            what: "h".into(),
            value: h.min(),
        });
    }
    let h = h.values();
    let n = g.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6e6f726d);
    let mut best = f64::INFINITY;
    for r in 0..restarts {
        let mut u: Vec<f64> = if r < n {
            (0..n).map(|i| if i == r { 1.0 } else { 0.0 }).collect()
        } else {
            (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
        };
        if !normalise(g, m, p, h, &mut u) {
            continue;
        }
        let (mut val, mut grad) = ratio_and_grad(g, m, p, h, q, &u);
        let mut step = 1.0;
        for _ in 0..2000 {
            let gn2: f64 = grad.iter().map(|x| x * x).sum();
            if gn2.sqrt() < 1e-13 {
                break;
            }
            let mut accepted = false;
            for _ in 0..60 {
                let mut trial: Vec<f64> = u.iter().zip(&grad).map(|(a, b)| a - step * b).collect();
                if normalise(g, m, p, h, &mut trial) {
                    let (tv, tg) = ratio_and_grad(g, m, p, h, q, &trial);
                    if tv <= val - 1e-4 * step * gn2 {
                        u = trial;
                        val = tv;
                        grad = tg;
                        accepted = true;
                        step *= 2.0;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        best = best.min(val);
    }
    Ok(best)
}
