//! Shared fixtures and brute-force reference implementations for the
//! integration tests. The references work from the raw edge list and never
//! call the library operators.

#![allow(dead_code)]

use polylap::{VertexFunction, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connected random graph: a random spanning tree plus extra edges.
pub fn random_graph(r: &mut ChaCha8Rng, n: usize) -> WeightedGraph {
    let mu: Vec<f64> = (0..n).map(|_| r.gen_range(0.2..5.0)).collect();
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for v in 1..n {
        let u = r.gen_range(0..v);
        seen.insert((u, v));
        edges.push((u, v, r.gen_range(0.1..3.0)));
    }
    for _ in 0..n {
        let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
        let (a, b) = (a.min(b), a.max(b));
        if a != b && seen.insert((a, b)) {
            edges.push((a, b, r.gen_range(0.1..3.0)));
        }
    }
    WeightedGraph::from_indices(&mu, &edges).unwrap()
}

pub fn random_values(r: &mut ChaCha8Rng, n: usize, amp: f64) -> Vec<f64> {
    (0..n).map(|_| r.gen_range(-amp..amp)).collect()
}

pub fn random_fn(r: &mut ChaCha8Rng, g: &WeightedGraph, amp: f64) -> VertexFunction {
    VertexFunction::new(g, random_values(r, g.len(), amp)).unwrap()
}

pub fn positive_fn(r: &mut ChaCha8Rng, g: &WeightedGraph) -> VertexFunction {
    VertexFunction::new(g, (0..g.len()).map(|_| r.gen_range(0.3..3.0)).collect()).unwrap()
}

/// Edge list `(a, b, omega)` by vertex index.
pub fn edge_list(g: &WeightedGraph) -> Vec<(usize, usize, f64)> {
    g.edges().iter().map(|e| (e.a, e.b, e.omega)).collect()
}

pub fn integral(g: &WeightedGraph, f: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..g.len() {
        s += g.mu()[i] * f[i];
    }
    s
}

pub fn gamma(g: &WeightedGraph, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; g.len()];
    for (x, y, w) in edge_list(g) {
        let t = w * (a[y] - a[x]) * (b[y] - b[x]);
        out[x] += t;
        out[y] += t;
    }
    out.iter().zip(g.mu()).map(|(s, m)| s / (2.0 * m)).collect()
}

pub fn laplacian(g: &WeightedGraph, f: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; g.len()];
    for (x, y, w) in edge_list(g) {
        out[x] += w * (f[y] - f[x]);
        out[y] += w * (f[x] - f[y]);
    }
    out.iter().zip(g.mu()).map(|(s, m)| s / m).collect()
}

pub fn laplacian_pow(g: &WeightedGraph, k: usize, f: &[f64]) -> Vec<f64> {
    (0..k).fold(f.to_vec(), |acc, _| laplacian(g, &acc))
}

/// `|grad^m f|` per vertex.
pub fn m_grad(g: &WeightedGraph, m: usize, f: &[f64]) -> Vec<f64> {
    let w = laplacian_pow(g, m / 2, f);
    if m % 2 == 0 {
        w.iter().map(|x| x.abs()).collect()
    } else {
        gamma(g, &w, &w).iter().map(|x| x.sqrt()).collect()
    }
}

/// `|grad^m f|^(p-2)` with the zero-gradient rule.
pub fn weight(len: f64, p: f64) -> f64 {
    if p == 2.0 {
        1.0
    } else if len == 0.0 {
        0.0
    } else {
        len.powf(p - 2.0)
    }
}

/// Weak-form pairing of the poly-Laplacian of `f` with `psi`.
pub fn poly_weak_pairing(g: &WeightedGraph, m: usize, p: f64, f: &[f64], psi: &[f64]) -> f64 {
    let k = m / 2;
    let len = m_grad(g, m, f);
    let wf = laplacian_pow(g, k, f);
    let wpsi = laplacian_pow(g, k, psi);
    let pair: Vec<f64> = if m % 2 == 0 {
        wf.iter().zip(&wpsi).map(|(a, b)| a * b).collect()
    } else {
        gamma(g, &wf, &wpsi)
    };
    let integrand: Vec<f64> = len.iter().zip(&pair).map(|(l, c)| weight(*l, p) * c).collect();
    integral(g, &integrand)
}

pub fn lp_pow(g: &WeightedGraph, q: f64, f: &[f64]) -> f64 {
    integral(g, &f.iter().map(|x| x.abs().powf(q)).collect::<Vec<_>>())
}

/// `int (|grad^m f|^p + h |f|^p) dmu`.
pub fn sobolev_pow(g: &WeightedGraph, m: usize, p: f64, h: &[f64], f: &[f64]) -> f64 {
    let len = m_grad(g, m, f);
    let integrand: Vec<f64> = (0..g.len()).map(|i| len[i].powf(p) + h[i] * f[i].abs().powf(p)).collect();
    integral(g, &integrand)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Mixed absolute/relative closeness: `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}
