//! Nonlinear terms `F(x, t, s)`, radial cut-offs and the modified
//! nonlinearities used to globalise hypotheses that only hold near the origin.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::energy::SystemParams;
use crate::error::{invalid, positive, Error, Result};
use crate::pow;

/// `(vertex, t, s) -> real`.
pub type ScalarFn = Arc<dyn Fn(usize, f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Superlinear,
    Sublinear,
}

/// Growth exponents and constants of a nonlinearity.
///
/// `coeffs` holds `M1..M4` in the superlinear regime and `K1..K4` in the
/// sublinear one. `beta` is only meaningful for the superlinear regime.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthMeta {
    pub regime: Regime,
    pub q: [f64; 2],
    pub k: [f64; 2],
    pub beta: Option<[f64; 2]>,
    pub coeffs: [f64; 4],
}

impl GrowthMeta {
    pub fn superlinear(q: [f64; 2], k: [f64; 2], beta: [f64; 2], m: [f64; 4]) -> Self {
        Self {
            regime: Regime::Superlinear,
            q,
            k,
            beta: Some(beta),
            coeffs: m,
        }
    }

    pub fn sublinear(q: [f64; 2], k: [f64; 2], kc: [f64; 4]) -> Self {
        Self {
            regime: Regime::Sublinear,
            q,
            k,
            beta: None,
            coeffs: kc,
        }
    }

    /// `M5 = (M3 + M4) / k1` (or `K5`).
    pub fn c5(&self) -> f64 {
        (self.coeffs[2] + self.coeffs[3]) / self.k[0]
    }

    /// `M6 = ((k1 - 1)/k1 + 1/k2) M4` (or `K6`).
    pub fn c6(&self) -> f64 {
        ((self.k[0] - 1.0) / self.k[0] + 1.0 / self.k[1]) * self.coeffs[3]
    }

    /// `theta_i = min(beta_i, k_i)`.
    pub fn theta(&self) -> Result<[f64; 2]> {
        match self.beta {
            Some(b) => Ok([b[0].min(self.k[0]), b[1].min(self.k[1])]),
            None => Err(Error::Regime("theta needs superlinear metadata".into())),
        }
    }

    /// Checks the exponent relations against the system exponents `p`.
    pub fn validate(&self, p: [f64; 2]) -> Result<()> {
        for (i, c) in self.coeffs.iter().enumerate() {
            positive(format!("growth constant #{}", i + 1), *c)?;
        }
        let (pmax, pmin) = (p[0].max(p[1]), p[0].min(p[1]));
        let (kmin, qmax) = (self.k[0].min(self.k[1]), self.q[0].max(self.q[1]));
        match self.regime {
            Regime::Superlinear => {
                let beta = self
                    .beta
                    .ok_or_else(|| Error::Regime("superlinear metadata without beta".into()))?;
                for i in 0..2 {
                    if self.q[i] <= p[i] {
                        return Err(Error::Regime(format!("need q{0} > p{0}", i + 1)));
                    }
                    if !(self.k[i] > p[i] && self.k[i] < self.q[i]) {
                        return Err(Error::Regime(format!("need k{0} in (p{0}, q{0})", i + 1)));
                    }
                    if beta[i] <= p[i] {
                        return Err(Error::Regime(format!("need beta{0} > p{0}", i + 1)));
                    }
                }
                if kmin <= pmax {
                    return Err(Error::Regime("need min(k1,k2) > max(p1,p2)".into()));
                }
            }
            Regime::Sublinear => {
                for i in 0..2 {
                    if !(self.q[i] > 1.0 && self.q[i] < p[i]) {
                        return Err(Error::Regime(format!("need q{0} in (1, p{0})", i + 1)));
                    }
                    if !(self.k[i] > 1.0 && self.k[i] < self.q[i]) {
                        return Err(Error::Regime(format!("need k{0} in (1, q{0})", i + 1)));
                    }
                }
                if pmin <= qmax {
                    return Err(Error::Regime("need min(p1,p2) > max(q1,q2)".into()));
                }
            }
        }
        Ok(())
    }
}

/// A nonlinearity with its partial derivatives and metadata.
#[derive(Clone)]
pub struct NonlinearityDef {
    pub name: String,
    eval: ScalarFn,
    d_t: ScalarFn,
    d_s: ScalarFn,
    /// Locality radius: hypotheses hold on `|(t,s)| <= delta`.
    pub delta: f64,
    pub growth: GrowthMeta,
    /// `F(x,-t,-s) = F(x,t,s)`.
    pub even: bool,
    /// `F` is defined and C^1 on all of R^2, not just near the origin.
    pub global: bool,
}

impl fmt::Debug for NonlinearityDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NonlinearityDef")
            .field("name", &self.name)
            .field("delta", &self.delta)
            .field("growth", &self.growth)
            .field("even", &self.even)
            .field("global", &self.global)
            .finish_non_exhaustive()
    }
}

impl NonlinearityDef {
    pub fn new(
        name: impl Into<String>,
        delta: f64,
        growth: GrowthMeta,
        eval: ScalarFn,
        d_t: ScalarFn,
        d_s: ScalarFn,
    ) -> Result<Self> {
        positive("delta", delta)?;
        Ok(Self {
            name: name.into(),
            eval,
            d_t,
            d_s,
            delta,
            growth,
            even: false,
            global: false,
        })
    }

    pub fn with_even(mut self, even: bool) -> Self {
        self.even = even;
        self
    }

    pub fn with_global(mut self, global: bool) -> Self {
        self.global = global;
        self
    }

    #[inline]
    pub fn value(&self, x: usize, t: f64, s: f64) -> f64 {
        (self.eval)(x, t, s)
    }

    #[inline]
    pub fn d_t(&self, x: usize, t: f64, s: f64) -> f64 {
        (self.d_t)(x, t, s)
    }

    #[inline]
    pub fn d_s(&self, x: usize, t: f64, s: f64) -> f64 {
        (self.d_s)(x, t, s)
    }
}

/// Radial C^1 smoothstep: 1 on `r <= delta/2`, 0 on `r >= delta`,
/// `1 - 3w^2 + 2w^3` with `w = 2r/delta - 1` in between. Returns the value
/// and its derivative in `r`.
pub fn cutoff_profile(r: f64, delta: f64) -> (f64, f64) {
    if r <= 0.5 * delta {
        (1.0, 0.0)
    } else if r >= delta {
        (0.0, 0.0)
    } else {
        let w = 2.0 * r / delta - 1.0;
        (1.0 - 3.0 * w * w + 2.0 * w * w * w, 6.0 * w * (w - 1.0) * 2.0 / delta)
    }
}

/// Cut-off value and partials `(c, c_t, c_s)` at `(t, s)`.
fn cutoff(t: f64, s: f64, delta: f64) -> (f64, f64, f64) {
    let r = t.hypot(s);
    let (c, dc) = cutoff_profile(r, delta);
    if dc == 0.0 {
        (c, 0.0, 0.0)
    } else {
        (c, dc * t / r, dc * s / r)
    }
}

/// Superlinear cut-off `tau`. Non-increasing in the radius, so
/// `t tau_t <= 0` and `s tau_s <= 0` everywhere.
pub fn tau(t: f64, s: f64, delta: f64) -> Result<f64> {
    positive("delta", delta)?;
    Ok(cutoff(t, s, delta).0)
}

/// Partials `(tau_t, tau_s)`.
pub fn tau_partials(t: f64, s: f64, delta: f64) -> Result<(f64, f64)> {
    positive("delta", delta)?;
    let (_, a, b) = cutoff(t, s, delta);
    Ok((a, b))
}

/// Sublinear cut-off `rho`; shares the profile with [`tau`].
pub fn rho(t: f64, s: f64, delta: f64) -> Result<f64> {
    tau(t, s, delta)
}

pub fn rho_partials(t: f64, s: f64, delta: f64) -> Result<(f64, f64)> {
    tau_partials(t, s, delta)
}

/// `c1 |t|^e1 + c2 |s|^e2` with partials.
#[derive(Debug, Clone, Copy)]
struct PowerTail {
    c: [f64; 2],
    e: [f64; 2],
}

impl PowerTail {
    fn value(&self, t: f64, s: f64) -> f64 {
        self.c[0] * pow(t.abs(), self.e[0]) + self.c[1] * pow(s.abs(), self.e[1])
    }

    fn d_t(&self, t: f64) -> f64 {
        self.c[0] * self.e[0] * crate::signed_pow(t, self.e[0])
    }

    fn d_s(&self, s: f64) -> f64 {
        self.c[1] * self.e[1] * crate::signed_pow(s, self.e[1])
    }
}

/// `c F + (1 - c) T` with the product rule. `F` is only evaluated where the
/// cut-off is nonzero, so it may be undefined outside its locality disc.
fn blend(f: &NonlinearityDef, tail: PowerTail, name: String) -> NonlinearityDef {
    let delta = f.delta;
    let (f1, f2, f3) = (f.clone(), f.clone(), f.clone());
    let eval: ScalarFn = Arc::new(move |x, t, s| {
        let (c, _, _) = cutoff(t, s, delta);
        let tail_v = if c < 1.0 { tail.value(t, s) } else { 0.0 };
        if c > 0.0 {
            c * f1.value(x, t, s) + (1.0 - c) * tail_v
        } else {
            tail_v
        }
    });
    let d_t: ScalarFn = Arc::new(move |x, t, s| {
        let (c, ct, _) = cutoff(t, s, delta);
        if c == 0.0 {
            return tail.d_t(t);
        }
        if c == 1.0 && ct == 0.0 {
            return f2.d_t(x, t, s);
        }
        let fv = f2.value(x, t, s);
        ct * (fv - tail.value(t, s)) + c * f2.d_t(x, t, s) + (1.0 - c) * tail.d_t(t)
    });
    let d_s: ScalarFn = Arc::new(move |x, t, s| {
        let (c, _, cs) = cutoff(t, s, delta);
        if c == 0.0 {
            return tail.d_s(s);
        }
        if c == 1.0 && cs == 0.0 {
            return f3.d_s(x, t, s);
        }
        let fv = f3.value(x, t, s);
        cs * (fv - tail.value(t, s)) + c * f3.d_s(x, t, s) + (1.0 - c) * tail.d_s(s)
    });
    NonlinearityDef {
        name,
        eval,
        d_t,
        d_s,
        delta,
        growth: f.growth.clone(),
        even: f.even,
        global: true,
    }
}

/// `F_bar = tau F + (1 - tau)(M5 |t|^k1 + M6 |s|^k2)`.
pub fn modify_superlinear(f: &NonlinearityDef) -> Result<NonlinearityDef> {
    if f.growth.regime != Regime::Superlinear {
        return Err(Error::Regime(format!("`{}` is not superlinear", f.name)));
    }
    let g = &f.growth;
    let tail = PowerTail {
        c: [g.c5(), g.c6()],
        e: g.k,
    };
    Ok(blend(f, tail, format!("{}+tau", f.name)))
}

/// `F_tilde = rho F + (1 - rho)(K1 |t|^q1 + K2 |s|^q2)`.
pub fn modify_sublinear(f: &NonlinearityDef) -> Result<NonlinearityDef> {
    if f.growth.regime != Regime::Sublinear {
        return Err(Error::Regime(format!("`{}` is not sublinear", f.name)));
    }
    let g = &f.growth;
    let tail = PowerTail {
        c: [g.coeffs[0], g.coeffs[1]],
        e: g.q,
    };
    Ok(blend(f, tail, format!("{}+rho", f.name)))
}

fn example51_sigma(r2: f64) -> (f64, f64) {
    // sin and the radial factor of the derivative: d sigma / dt = t * dsig
    let a = r2 - 16.0;
    let arg = PI * a * a / 450.0;
    (arg.sin(), arg.cos() * 2.0 * PI * a / 225.0)
}

fn example51_value(t: f64, s: f64) -> f64 {
    let r2 = t * t + s * s;
    let p6 = pow(t.abs(), 6.0) + pow(s.abs(), 6.0);
    let p4 = pow(t.abs(), 4.0) + pow(s.abs(), 4.0);
    if r2 <= 1.0 {
        p6
    } else if r2 <= 16.0 {
        let (sig, _) = example51_sigma(r2);
        sig * p6 + (1.0 - sig) * p4
    } else {
        p4
    }
}

fn example51_partial(a: f64, b: f64) -> f64 {
    // derivative in the first argument; symmetric in (t, s)
    let r2 = a * a + b * b;
    let d6 = 6.0 * pow(a.abs(), 4.0) * a;
    let d4 = 4.0 * a * a * a;
    if r2 <= 1.0 {
        d6
    } else if r2 <= 16.0 {
        let (sig, dsig) = example51_sigma(r2);
        let p6 = pow(a.abs(), 6.0) + pow(b.abs(), 6.0);
        let p4 = pow(a.abs(), 4.0) + pow(b.abs(), 4.0);
        sig * d6 + (1.0 - sig) * d4 + (p6 - p4) * a * dsig
    } else {
        d4
    }
}

/// `F = sigma (|t|^6 + |s|^6) + (1 - sigma)(|t|^4 + |s|^4)` with the
/// three-branch blending `sigma`; `delta = 1`.
pub fn builtin_example51() -> NonlinearityDef {
    NonlinearityDef {
        name: "example51".into(),
        eval: Arc::new(|_, t, s| example51_value(t, s)),
        d_t: Arc::new(|_, t, s| example51_partial(t, s)),
        d_s: Arc::new(|_, t, s| example51_partial(s, t)),
        delta: 1.0,
        growth: GrowthMeta::superlinear([7.0, 7.0], [5.0, 5.0], [3.0, 3.0], [1.0, 1.0, 6.0, 6.0]),
        even: true,
        global: true,
    }
}

/// `F = (3/4)(|t|^(4/3) + |s|^(4/3))`; `delta = 1`.
pub fn builtin_example52() -> NonlinearityDef {
    let e = 4.0 / 3.0;
    NonlinearityDef {
        name: "example52".into(),
        eval: Arc::new(move |_, t, s| 0.75 * (t.abs().powf(e) + s.abs().powf(e))),
        d_t: Arc::new(|_, t, _| t.cbrt()),
        d_s: Arc::new(|_, _, s| s.cbrt()),
        delta: 1.0,
        growth: GrowthMeta::sublinear([5.0 / 3.0, 5.0 / 3.0], [1.25, 1.25], [0.75, 0.75, 2.0, 2.0]),
        even: true,
        global: true,
    }
}

pub fn builtin(name: &str) -> Result<NonlinearityDef> {
    match name {
        "example51" => Ok(builtin_example51()),
        "example52" => Ok(builtin_example52()),
        other => invalid(format!("unknown nonlinearity `{other}`")),
    }
}

/// Worst observed margin of one sampled inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisCheck {
    pub name: String,
    /// Smallest `rhs - lhs` over the samples (negative means violated).
    pub worst_margin: f64,
    /// `(vertex, t, s)` of the worst sample.
    pub witness: Option<(usize, f64, f64)>,
    pub passed: bool,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GrowthReport {
    pub checks: Vec<HypothesisCheck>,
}

impl GrowthReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&HypothesisCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn first_failure(&self) -> Option<&HypothesisCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl fmt::Display for GrowthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(
                f,
                "{:<6} {:<28} worst margin {:>24}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                crate::fmt17(c.worst_margin)
            )?;
            if let (false, Some((x, t, s))) = (c.passed, c.witness) {
                write!(f, "  witness vertex #{x} (t,s)=({t:e},{s:e})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

const REL_SLACK: f64 = 1e-12;

struct Tally {
    check: HypothesisCheck,
}

impl Tally {
    fn new(name: &str) -> Self {
        Self {
            check: HypothesisCheck {
                name: name.to_string(),
                worst_margin: f64::INFINITY,
                witness: None,
                passed: true,
                samples: 0,
            },
        }
    }

    /// Records `lhs <= rhs` (or `lhs < rhs` when `strict`).
    fn le(&mut self, x: usize, t: f64, s: f64, lhs: f64, rhs: f64, strict: bool) {
        let margin = rhs - lhs;
        let slack = REL_SLACK * (lhs.abs() + rhs.abs());
        let ok = if strict { margin > 0.0 } else { margin >= -slack } && margin.is_finite();
        self.check.samples += 1;
        if margin < self.check.worst_margin || margin.is_nan() {
            self.check.worst_margin = margin;
            self.check.witness = Some((x, t, s));
        }
        if !ok {
            if self.check.passed {
                self.check.witness = Some((x, t, s));
            }
            self.check.passed = false;
        }
    }

    fn eq(&mut self, x: usize, t: f64, s: f64, a: f64, b: f64) {
        self.check.samples += 1;
        let margin = -(a - b).abs();
        if margin < self.check.worst_margin {
            self.check.worst_margin = margin;
            self.check.witness = Some((x, t, s));
        }
        if a != b {
            self.check.passed = false;
        }
    }

    fn finish(self) -> HypothesisCheck {
        self.check
    }
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let inv = 1.0 / base as f64;
    while i > 0 {
        f *= inv;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Halton points (bases 2 and 3) mapped uniformly onto the closed disc of
/// radius `radius`. Every fourth point is pushed onto the boundary circle.
pub fn disc_samples(n: usize, radius: f64) -> Vec<(f64, f64)> {
    (1..=n as u64)
        .map(|i| {
            let a = radical_inverse(i, 2);
            let b = radical_inverse(i, 3);
            let r = if i % 4 == 0 { radius } else { radius * a.sqrt() };
            let th = 2.0 * PI * b;
            (r * th.cos(), r * th.sin())
        })
        .collect()
}

/// Falsifies the growth hypotheses of `f` by sampling `samples` points of the
/// disc `|(t,s)| <= delta` at every vertex. A pass is evidence, not proof.
pub fn check_growth(f: &NonlinearityDef, params: &SystemParams, samples: usize) -> Result<GrowthReport> {
    if samples == 0 {
        return invalid("samples must be >= 1");
    }
    let g = &f.growth;
    g.validate([params.p1, params.p2])?;
    let vertices = params.h1.len();
    let pts = disc_samples(samples, f.delta);
    let [c1, c2, c3, c4] = g.coeffs;
    let (k1, k2) = (g.k[0], g.k[1]);
    let (q1, q2) = (g.q[0], g.q[1]);
    let (c5, c6) = (g.c5(), g.c6());
    let (lower_name, deriv_name) = match g.regime {
        Regime::Superlinear => ("lower growth bound", "growth"),
        Regime::Sublinear => ("lower growth bound", "growth"),
    };
    let mut lower = Tally::new(lower_name);
    let mut dt = Tally::new(&format!("{deriv_name} |F_t| bound"));
    let mut ds = Tally::new(&format!("{deriv_name} |F_s| bound"));
    let mut upper = Tally::new(match g.regime {
        Regime::Superlinear => "upper growth bound",
        Regime::Sublinear => "upper growth bound",
    });
    let mut origin = Tally::new("F(x,0,0) = 0");
    let mut positivity = Tally::new("positivity F > 0");
    let mut ar = Tally::new("Ambrosetti-Rabinowitz inequality");
    let mut even = Tally::new("evenness");

    for x in 0..vertices {
        origin.eq(x, 0.0, 0.0, f.value(x, 0.0, 0.0), 0.0);
        for &(t, s) in &pts {
            let (at, as_) = (t.abs(), s.abs());
            let fv = f.value(x, t, s);
            let ft = f.d_t(x, t, s);
            let fs = f.d_s(x, t, s);
            lower.le(x, t, s, c1 * pow(at, q1) + c2 * pow(as_, q2), fv, false);
            dt.le(x, t, s, ft.abs(), c3 * pow(at, k1 - 1.0) + c4 * pow(as_, k2 * (k1 - 1.0) / k1), false);
            ds.le(x, t, s, fs.abs(), c3 * pow(at, k1 * (k2 - 1.0) / k2) + c4 * pow(as_, k2 - 1.0), false);
            upper.le(x, t, s, fv, c5 * pow(at, k1) + c6 * pow(as_, k2), false);
            match g.regime {
                Regime::Superlinear => {
                    if t != 0.0 || s != 0.0 {
                        let beta = g.beta.expect("validated");
                        positivity.le(x, t, s, 0.0, fv, true);
                        ar.le(x, t, s, fv, t * ft / beta[0] + s * fs / beta[1], false);
                    }
                }
                Regime::Sublinear => even.eq(x, t, s, fv, f.value(x, -t, -s)),
            }
        }
    }
    let mut checks = vec![lower.finish(), dt.finish(), ds.finish(), upper.finish(), origin.finish()];
    match g.regime {
        Regime::Superlinear => checks.extend([positivity.finish(), ar.finish()]),
        Regime::Sublinear => checks.push(even.finish()),
    }
    Ok(GrowthReport { checks })
}

/// Samples the contract of a cut-off modified nonlinearity `modified` built
/// from `raw`:
///
/// * exact agreement with `raw` on the disc of radius `delta/2`;
/// * the lower growth bound on the `delta`-disc and the upper tail bound on
///   a disc of radius `outer_factor * delta`;
/// * superlinear: `0 < F <= t F_t / theta1 + s F_s / theta2` away from 0;
/// * sublinear: evenness.
pub fn check_modified(
    modified: &NonlinearityDef,
    raw: &NonlinearityDef,
    vertices: usize,
    samples: usize,
    outer_factor: f64,
) -> Result<GrowthReport> {
    if samples == 0 {
        return invalid("samples must be >= 1");
    }
    let g = &raw.growth;
    let delta = raw.delta;
    let [c1, c2, ..] = g.coeffs;
    let (q1, q2, k1, k2) = (g.q[0], g.q[1], g.k[0], g.k[1]);
    let inner = disc_samples(samples, 0.5 * delta);
    let disc = disc_samples(samples, delta);
    let outer = disc_samples(samples, outer_factor * delta);

    let mut plateau = Tally::new("plateau F_mod = F");
    let mut lower = Tally::new("lower bound on delta-disc");
    let mut upper = Tally::new("upper bound (global)");
    let mut nonneg = Tally::new("F_mod >= 0 (global)");
    let mut ar = Tally::new("Ambrosetti-Rabinowitz with theta (global)");
    let mut even = Tally::new("evenness (global)");
    for x in 0..vertices {
        for &(t, s) in &inner {
            plateau.eq(x, t, s, modified.value(x, t, s), raw.value(x, t, s));
            plateau.eq(x, t, s, modified.d_t(x, t, s), raw.d_t(x, t, s));
            plateau.eq(x, t, s, modified.d_s(x, t, s), raw.d_s(x, t, s));
        }
        for &(t, s) in &disc {
            lower.le(x, t, s, c1 * pow(t.abs(), q1) + c2 * pow(s.abs(), q2), modified.value(x, t, s), false);
        }
        for &(t, s) in disc.iter().chain(&outer) {
            let fv = modified.value(x, t, s);
            let (at, as_) = (t.abs(), s.abs());
            nonneg.le(x, t, s, 0.0, fv, false);
            match g.regime {
                Regime::Superlinear => {
                    upper.le(x, t, s, fv, g.c5() * pow(at, k1) + g.c6() * pow(as_, k2), false);
                    if t != 0.0 || s != 0.0 {
                        let th = g.theta()?;
                        let rhs = t * modified.d_t(x, t, s) / th[0] + s * modified.d_s(x, t, s) / th[1];
                        ar.le(x, t, s, 0.0, fv, true);
                        ar.le(x, t, s, fv, rhs, false);
                    }
                }
                Regime::Sublinear => {
                    let a = g.coeffs[0].max(g.c5());
                    let b = g.coeffs[1].max(g.c6());
                    let bound = a * (pow(at, q1) + pow(at, k1)) + b * (pow(as_, q2) + pow(as_, k2));
                    upper.le(x, t, s, fv, bound, false);
                    even.eq(x, t, s, fv, modified.value(x, -t, -s));
                }
            }
        }
        if g.regime == Regime::Sublinear {
            for &(t, s) in &outer {
                lower.le(x, t, s, c1 * pow(t.abs(), q1) + c2 * pow(s.abs(), q2), modified.value(x, t, s), false);
            }
        }
    }
    let mut checks = vec![plateau.finish(), lower.finish(), upper.finish(), nonneg.finish()];
    checks.push(match g.regime {
        Regime::Superlinear => ar.finish(),
        Regime::Sublinear => even.finish(),
    });
    Ok(GrowthReport { checks })
}
