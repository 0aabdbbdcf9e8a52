//! Discrete differential operators and norms on a [`WeightedGraph`].
//!
//! All sums run in the fixed vertex order of the graph, so results are
//! bit-reproducible. The checked functions take [`VertexFunction`]s; the
//! slice kernels in [`kernels`] are what the energy and solver code calls in
//! their inner loops.

use crate::error::{invalid, positive, Result};
use crate::graph::{SystemState, VertexFunction, WeightedGraph};

/// Unchecked slice versions of the operators. Callers guarantee that every
/// slice has one entry per vertex.
pub mod kernels {
    use super::*;
    use crate::{pow, signed_pow};

    pub fn integral(g: &WeightedGraph, phi: &[f64]) -> f64 {
        g.mu().iter().zip(phi).map(|(m, f)| m * f).sum()
    }

    pub fn gamma(g: &WeightedGraph, a: &[f64], b: &[f64]) -> Vec<f64> {
        (0..g.len())
            .map(|x| {
                let s: f64 = g
                    .neighbors(x)
                    .iter()
                    .map(|&(y, w)| w * (a[y] - a[x]) * (b[y] - b[x]))
                    .sum();
                s / (2.0 * g.mu()[x])
            })
            .collect()
    }

    pub fn laplacian(g: &WeightedGraph, phi: &[f64]) -> Vec<f64> {
        (0..g.len())
            .map(|x| {
                let s: f64 = g.neighbors(x).iter().map(|&(y, w)| w * (phi[y] - phi[x])).sum();
                s / g.mu()[x]
            })
            .collect()
    }

    pub fn laplacian_power(g: &WeightedGraph, k: usize, phi: &[f64]) -> Vec<f64> {
        let mut w = phi.to_vec();
        for _ in 0..k {
            w = laplacian(g, &w);
        }
        w
    }

    /// `|grad phi|^(p-2)` evaluated from `Gamma(phi)`; 0 where the gradient
    /// vanishes and `p != 2`.
    pub(crate) fn gradient_weight(gamma: f64, p: f64) -> f64 {
        if p == 2.0 {
            1.0
        } else if gamma == 0.0 {
            0.0
        } else {
            pow(gamma, (p - 2.0) / 2.0)
        }
    }

    /// `(1 / 2mu(x)) sum_y (a(y) + a(x)) omega_xy (phi(y) - phi(x))`.
    fn weighted_divergence(g: &WeightedGraph, a: &[f64], phi: &[f64]) -> Vec<f64> {
        (0..g.len())
            .map(|x| {
                let s: f64 = g
                    .neighbors(x)
                    .iter()
                    .map(|&(y, w)| (a[y] + a[x]) * w * (phi[y] - phi[x]))
                    .sum();
                s / (2.0 * g.mu()[x])
            })
            .collect()
    }

    pub fn p_laplacian(g: &WeightedGraph, p: f64, phi: &[f64]) -> Vec<f64> {
        let a: Vec<f64> = gamma(g, phi, phi).into_iter().map(|gm| gradient_weight(gm, p)).collect();
        weighted_divergence(g, &a, phi)
    }

    /// Pointwise `|nabla^m phi|^2`.
    pub fn m_grad_sq(g: &WeightedGraph, m: usize, phi: &[f64]) -> Vec<f64> {
        let w = laplacian_power(g, m / 2, phi);
        if m % 2 == 0 {
            w.into_iter().map(|x| x * x).collect()
        } else {
            gamma(g, &w, &w)
        }
    }

    pub fn m_grad_len(g: &WeightedGraph, m: usize, phi: &[f64]) -> Vec<f64> {
        m_grad_sq(g, m, phi).into_iter().map(f64::sqrt).collect()
    }

    /// `int |nabla^m phi|^p dmu`.
    pub fn grad_power_integral(g: &WeightedGraph, m: usize, p: f64, phi: &[f64]) -> f64 {
        let sq = m_grad_sq(g, m, phi);
        g.mu().iter().zip(&sq).map(|(mu, s)| mu * pow(*s, p / 2.0)).sum()
    }

    /// `int |phi|^q dmu`.
    pub fn lp_power(g: &WeightedGraph, q: f64, phi: &[f64]) -> f64 {
        g.mu().iter().zip(phi).map(|(mu, f)| mu * pow(f.abs(), q)).sum()
    }

    /// `int h |phi|^p dmu`.
    pub fn weighted_lp_power(g: &WeightedGraph, p: f64, h: &[f64], phi: &[f64]) -> f64 {
        g.mu()
            .iter()
            .zip(h)
            .zip(phi)
            .map(|((mu, h), f)| mu * h * pow(f.abs(), p))
            .sum()
    }

    /// Poly-Laplacian as the coordinate derivative of
    /// `(1/p) int |nabla^m phi|^p dmu`, divided by `mu(x)`.
    ///
    /// With `k = floor(m/2)` and `w = Delta^k phi` the derivative collapses to
    /// `Delta^k(|w|^(p-2) w)` for even `m` and `-Delta^k(Delta_p-form of w)`
    /// for odd `m`, because `Delta` is self-adjoint in `L^2(dmu)`.
    pub fn poly_laplacian(g: &WeightedGraph, m: usize, p: f64, phi: &[f64]) -> Vec<f64> {
        let k = m / 2;
        let w = laplacian_power(g, k, phi);
        let inner: Vec<f64> = if m % 2 == 0 {
            w.iter().map(|&x| signed_pow(x, p)).collect()
        } else {
            p_laplacian(g, p, &w).into_iter().map(|x| -x).collect()
        };
        laplacian_power(g, k, &inner)
    }
}

fn check_m(m: usize) -> Result<()> {
    if m < 1 {
        return invalid(format!("order m must be >= 1, got {m}"));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return invalid(format!("exponent p must be > 1, got {p}"));
    }
    Ok(())
}

fn check_q(q: f64) -> Result<()> {
    if !(q >= 1.0 && q.is_finite()) {
        return invalid(format!("exponent q must be >= 1, got {q}"));
    }
    Ok(())
}

fn check_h(g: &WeightedGraph, h: &VertexFunction) -> Result<()> {
    h.check(g)?;
    for (name, &v) in g.names().iter().zip(h.values()) {
        positive(format!("h({name})"), v)?;
    }
    Ok(())
}

fn wrap(g: &WeightedGraph, values: Vec<f64>) -> VertexFunction {
    VertexFunction::from_raw(g.id(), values)
}

/// `int phi dmu = sum mu(x) phi(x)`.
pub fn integral(g: &WeightedGraph, phi: &VertexFunction) -> Result<f64> {
    phi.check(g)?;
    Ok(kernels::integral(g, phi.values()))
}

/// Gradient form `Gamma(phi1, phi2)`.
pub fn gamma(g: &WeightedGraph, phi1: &VertexFunction, phi2: &VertexFunction) -> Result<VertexFunction> {
    phi1.check(g)?;
    phi2.check(g)?;
    Ok(wrap(g, kernels::gamma(g, phi1.values(), phi2.values())))
}

/// `|grad phi| = sqrt(Gamma(phi, phi))`.
pub fn grad_len(g: &WeightedGraph, phi: &VertexFunction) -> Result<VertexFunction> {
    m_grad_len(g, 1, phi)
}

pub fn laplacian(g: &WeightedGraph, phi: &VertexFunction) -> Result<VertexFunction> {
    phi.check(g)?;
    Ok(wrap(g, kernels::laplacian(g, phi.values())))
}

/// Length of the m-order gradient: `|Delta^(m/2) phi|` for even `m`,
/// `|grad Delta^((m-1)/2) phi|` for odd `m`.
pub fn m_grad_len(g: &WeightedGraph, m: usize, phi: &VertexFunction) -> Result<VertexFunction> {
    check_m(m)?;
    phi.check(g)?;
    Ok(wrap(g, kernels::m_grad_len(g, m, phi.values())))
}

/// Pointwise p-Laplacian. Where `|grad phi| = 0` and `p < 2` the factor
/// `|grad phi|^(p-2)` is taken as 0.
pub fn p_laplacian(g: &WeightedGraph, p: f64, phi: &VertexFunction) -> Result<VertexFunction> {
    check_p(p)?;
    phi.check(g)?;
    Ok(wrap(g, kernels::p_laplacian(g, p, phi.values())))
}

/// Generalised poly-Laplacian `L_{m,p}`; `L_{1,p} = -Delta_p` and
/// `L_{m,2} = (-Delta)^m`.
pub fn poly_laplacian(g: &WeightedGraph, m: usize, p: f64, phi: &VertexFunction) -> Result<VertexFunction> {
    check_m(m)?;
    check_p(p)?;
    phi.check(g)?;
    Ok(wrap(g, kernels::poly_laplacian(g, m, p, phi.values())))
}

pub fn lp_norm(g: &WeightedGraph, q: f64, phi: &VertexFunction) -> Result<f64> {
    check_q(q)?;
    phi.check(g)?;
    Ok(crate::pow(kernels::lp_power(g, q, phi.values()), 1.0 / q))
}

/// `||phi||_{m,p} = (int |nabla^m phi|^p + h |phi|^p dmu)^(1/p)`.
pub fn sobolev_norm(g: &WeightedGraph, m: usize, p: f64, h: &VertexFunction, phi: &VertexFunction) -> Result<f64> {
    check_m(m)?;
    check_p(p)?;
    check_h(g, h)?;
    phi.check(g)?;
    Ok(sobolev_norm_raw(g, m, p, h.values(), phi.values()))
}

pub(crate) fn sobolev_norm_raw(g: &WeightedGraph, m: usize, p: f64, h: &[f64], phi: &[f64]) -> f64 {
    let s = kernels::grad_power_integral(g, m, p, phi) + kernels::weighted_lp_power(g, p, h, phi);
    crate::pow(s, 1.0 / p)
}

pub fn sup_norm(phi: &VertexFunction) -> f64 {
    phi.values().iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// `max_x |(u(x), v(x))|` with the Euclidean length at each vertex.
pub fn sup_norm_pair(s: &SystemState) -> f64 {
    s.u.values()
        .iter()
        .zip(s.v.values())
        .fold(0.0, |acc, (a, b)| acc.max(a.hypot(*b)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingConstants {
    /// `(mu_inf h_inf)^(-1/p)`: `||phi||_inf <= factor * ||phi||_{m,p}`.
    pub sup_bound_factor: f64,
    /// `(sum mu)^(1/q) / (mu_inf h_inf)^(1/p)`.
    pub lq_bound_factor: f64,
}

pub fn embedding_constants(
    g: &WeightedGraph,
    m: usize,
    p: f64,
    h: &VertexFunction,
    q: f64,
) -> Result<EmbeddingConstants> {
    check_m(m)?;
    check_p(p)?;
    check_q(q)?;
    check_h(g, h)?;
    let base = crate::pow(g.mu_min() * h.min(), 1.0 / p);
    Ok(EmbeddingConstants {
        sup_bound_factor: 1.0 / base,
        lq_bound_factor: crate::pow(g.total_measure(), 1.0 / q) / base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pair() -> WeightedGraph {
        WeightedGraph::from_indices(&[1.0, 1.0], &[(0, 1, 1.0)]).unwrap()
    }

    #[test]
    fn two_vertex_hand_values() {
        let g = pair();
        let phi = VertexFunction::new(&g, vec![0.0, 1.0]).unwrap();
        assert_eq!(gamma(&g, &phi, &phi).unwrap().values(), &[0.5, 0.5]);
        let gl = grad_len(&g, &phi).unwrap();
        assert_relative_eq!(gl.values()[0], 0.5f64.sqrt());
        assert_relative_eq!(gl.values()[1], 0.5f64.sqrt());
        assert_eq!(laplacian(&g, &phi).unwrap().values(), &[1.0, -1.0]);
        let h = VertexFunction::constant(&g, 1.0);
        assert_relative_eq!(sobolev_norm(&g, 1, 2.0, &h, &phi).unwrap(), 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn constants_and_zero() {
        let g = WeightedGraph::from_indices(&[1.0, 2.0, 3.0], &[(0, 1, 1.0), (1, 2, 0.5)]).unwrap();
        let c = VertexFunction::constant(&g, 3.7);
        let any = VertexFunction::new(&g, vec![0.3, -1.0, 2.0]).unwrap();
        assert!(gamma(&g, &c, &any).unwrap().values().iter().all(|&v| v == 0.0));
        assert!(grad_len(&g, &c).unwrap().values().iter().all(|&v| v == 0.0));
        assert!(laplacian(&g, &c).unwrap().values().iter().all(|&v| v == 0.0));
        assert!(p_laplacian(&g, 1.5, &c).unwrap().values().iter().all(|&v| v == 0.0));
        let z = VertexFunction::zeros(&g);
        assert_eq!(integral(&g, &z).unwrap(), 0.0);
        assert_eq!(lp_norm(&g, 2.0, &z).unwrap(), 0.0);
        let h = VertexFunction::constant(&g, 1.0);
        assert_eq!(sobolev_norm(&g, 3, 2.5, &h, &z).unwrap(), 0.0);
    }

    #[test]
    fn sup_norms() {
        let g = WeightedGraph::from_indices(&[1.0; 3], &[]).unwrap();
        let phi = VertexFunction::new(&g, vec![0.0, 1.0, -3.0]).unwrap();
        assert_eq!(sup_norm(&phi), 3.0);
        let g2 = WeightedGraph::from_indices(&[1.0; 2], &[]).unwrap();
        let s = SystemState::new(
            VertexFunction::new(&g2, vec![3.0, 0.0]).unwrap(),
            VertexFunction::new(&g2, vec![4.0, 0.0]).unwrap(),
        )
        .unwrap();
        assert_eq!(sup_norm_pair(&s), 5.0);
    }

    #[test]
    fn parameter_errors() {
        let g = pair();
        let phi = VertexFunction::zeros(&g);
        assert!(m_grad_len(&g, 0, &phi).is_err());
        assert!(p_laplacian(&g, 1.0, &phi).is_err());
        assert!(poly_laplacian(&g, 0, 2.0, &phi).is_err());
        assert!(lp_norm(&g, 0.5, &phi).is_err());
        let bad_h = VertexFunction::new(&g, vec![1.0, 0.0]).unwrap();
        assert!(sobolev_norm(&g, 1, 2.0, &bad_h, &phi).is_err());
        let other = pair();
        assert_eq!(integral(&other, &phi).unwrap_err(), crate::Error::GraphMismatch);
    }

    #[test]
    fn low_order_collapse() {
        let g = WeightedGraph::from_indices(&[1.0, 2.0, 0.5], &[(0, 1, 1.0), (1, 2, 3.0), (0, 2, 0.25)]).unwrap();
        let phi = VertexFunction::new(&g, vec![0.2, -0.7, 1.1]).unwrap();
        assert_eq!(m_grad_len(&g, 1, &phi).unwrap(), grad_len(&g, &phi).unwrap());
        let lap = laplacian(&g, &phi).unwrap();
        let m2 = m_grad_len(&g, 2, &phi).unwrap();
        for (a, b) in m2.values().iter().zip(lap.values()) {
            assert_eq!(*a, b.abs());
        }
        let m3 = m_grad_len(&g, 3, &phi).unwrap();
        let oracle = grad_len(&g, &lap).unwrap();
        for (a, b) in m3.values().iter().zip(oracle.values()) {
            assert_relative_eq!(*a, *b, max_relative = 1e-14);
        }
        let pl = p_laplacian(&g, 2.0, &phi).unwrap();
        assert_eq!(pl, lap);
    }

    #[test]
    fn embedding_factors_positive() {
        let g = WeightedGraph::from_indices(&[0.5, 2.0], &[(0, 1, 1.0)]).unwrap();
        let h = VertexFunction::new(&g, vec![3.0, 0.1]).unwrap();
        let c = embedding_constants(&g, 2, 3.0, &h, 1.5).unwrap();
        assert!(c.sup_bound_factor > 0.0 && c.lq_bound_factor > 0.0);
        assert_relative_eq!(c.sup_bound_factor, (0.05f64).powf(-1.0 / 3.0), max_relative = 1e-14);
    }
}
