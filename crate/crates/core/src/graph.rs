//! Finite weighted graphs, real-valued vertex functions and their text formats.
//!
//! Graph file grammar (UTF-8, line oriented, `#` starts a comment):
//!
//! ```text
//! vertex <id> <mu>
//! edge <id1> <id2> <omega>
//! ```
//!
//! The order of `vertex` lines fixes the vertex ordering used by every
//! [`VertexFunction`] built against the graph.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

static NEXT_GRAPH_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub omega: f64,
}

/// A finite graph with vertex measure `mu` and symmetric edge weights `omega`.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    id: u64,
    names: Vec<String>,
    index: HashMap<String, usize>,
    mu: Vec<f64>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphStats {
    pub mu_min: f64,
    pub total_measure: f64,
    pub vertex_count: usize,
    pub edge_count: usize,
}

impl WeightedGraph {
    /// Builds a graph from vertex `(name, mu)` pairs and edges given by vertex
    /// names.
    pub fn new<S: AsRef<str>>(vertices: &[(S, f64)], edges: &[(S, S, f64)]) -> Result<Self> {
        let mut b = Builder::default();
        for (name, mu) in vertices {
            b.vertex(name.as_ref(), *mu)?;
        }
        for (x, y, w) in edges {
            b.edge(x.as_ref(), y.as_ref(), *w)?;
        }
        b.finish()
    }

    /// Builds a graph on vertices `x1..xn` from index-based edges.
    pub fn from_indices(mu: &[f64], edges: &[(usize, usize, f64)]) -> Result<Self> {
        let names: Vec<String> = (1..=mu.len()).map(|i| format!("x{i}")).collect();
        let verts: Vec<(&str, f64)> = names.iter().map(|s| s.as_str()).zip(mu.iter().copied()).collect();
        let mut b = Builder::default();
        for (n, m) in verts {
            b.vertex(n, m)?;
        }
        for &(x, y, w) in edges {
            let (Some(xn), Some(yn)) = (names.get(x), names.get(y)) else {
                return Err(Error::UnknownVertex(format!("#{}", x.max(y))));
            };
            b.edge(xn, yn, w)?;
        }
        b.finish()
    }

    pub(crate) fn id(&self) -> u64 {
        self.id
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbours of vertex `x` with the connecting edge weight.
    pub fn neighbors(&self, x: usize) -> &[(usize, f64)] {
        &self.adjacency[x]
    }

    /// `deg(x) = sum of omega over edges incident to x`.
    pub fn degree(&self, name: &str) -> Result<f64> {
        let x = self.vertex_index(name)?;
        Ok(self.degree_at(x))
    }

    pub fn degree_at(&self, x: usize) -> f64 {
        self.adjacency[x].iter().map(|&(_, w)| w).sum()
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            mu_min: self.mu_min(),
            total_measure: self.total_measure(),
            vertex_count: self.len(),
            edge_count: self.edges.len(),
        }
    }

    pub fn mu_min(&self) -> f64 {
        self.mu.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Sum of `mu` in vertex order.
    pub fn total_measure(&self) -> f64 {
        self.mu.iter().sum()
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(y, _) in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Returns a copy with every vertex measure multiplied by `factor`.
    pub fn scale_measure(&self, factor: f64) -> Result<Self> {
        crate::error::positive("measure scale", factor)?;
        let mut g = self.clone();
        g.mu.iter_mut().for_each(|m| *m *= factor);
        g.id = NEXT_GRAPH_ID.fetch_add(1, Ordering::Relaxed);
        Ok(g)
    }

    /// Serialises in the graph file format; `parse_graph` reads it back exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, mu) in self.names.iter().zip(&self.mu) {
            let _ = writeln!(out, "vertex {name} {mu:?}");
        }
        for e in &self.edges {
            let _ = writeln!(out, "edge {} {} {:?}", self.names[e.a], self.names[e.b], e.omega);
        }
        out
    }
}

#[derive(Default)]
struct Builder {
    names: Vec<String>,
    index: HashMap<String, usize>,
    mu: Vec<f64>,
    edges: Vec<Edge>,
    seen: HashSet<(usize, usize)>,
}

impl Builder {
    fn vertex(&mut self, name: &str, mu: f64) -> Result<()> {
        if self.index.contains_key(name) {
            return Err(Error::DuplicateVertex(name.to_string()));
        }
        crate::error::positive(format!("mu({name})"), mu)?;
        self.index.insert(name.to_string(), self.names.len());
        self.names.push(name.to_string());
        self.mu.push(mu);
        Ok(())
    }

    fn edge(&mut self, x: &str, y: &str, omega: f64) -> Result<()> {
        if x == y {
            return Err(Error::SelfLoop(x.to_string()));
        }
        let a = *self
            .index
            .get(x)
            .ok_or_else(|| Error::UnknownVertex(x.to_string()))?;
        let b = *self
            .index
            .get(y)
            .ok_or_else(|| Error::UnknownVertex(y.to_string()))?;
        crate::error::positive(format!("omega({x},{y})"), omega)?;
        if !self.seen.insert((a.min(b), a.max(b))) {
            return Err(Error::DuplicateEdge(x.to_string(), y.to_string()));
        }
        self.edges.push(Edge { a, b, omega });
        Ok(())
    }

    fn finish(self) -> Result<WeightedGraph> {
        if self.names.is_empty() {
            return Err(Error::NoVertices);
        }
        let mut adjacency = vec![Vec::new(); self.names.len()];
        for e in &self.edges {
            adjacency[e.a].push((e.b, e.omega));
            adjacency[e.b].push((e.a, e.omega));
        }
        let g = WeightedGraph {
            id: NEXT_GRAPH_ID.fetch_add(1, Ordering::Relaxed),
            names: self.names,
            index: self.index,
            mu: self.mu,
            edges: self.edges,
            adjacency,
        };
        if !g.is_connected() {
            log::warn!("graph is disconnected");
        }
        Ok(g)
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub(crate) fn parse_real(tok: &str, line: usize) -> Result<f64> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Syntax {
            line,
            msg: format!("expected a finite real, got `{tok}`"),
        }),
    }
}

pub(crate) fn at_line(line: usize, e: Error) -> Error {
    match e {
        Error::Syntax { .. } => e,
        other => Error::Syntax {
            line,
            msg: other.to_string(),
        },
    }
}

/// Parses the graph file format.
///
/// Semantic errors (self-loops, duplicates, unknown endpoints, non-positive
/// weights) are reported together with the offending line number.
pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let mut b = Builder::default();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let toks: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["vertex", id, mu] => {
                let mu = parse_real(mu, lineno)?;
                b.vertex(id, mu).map_err(|e| at_line(lineno, e))?;
            }
            ["edge", x, y, w] => {
                let w = parse_real(w, lineno)?;
                b.edge(x, y, w).map_err(|e| at_line(lineno, e))?;
            }
            [kw, ..] => {
                return Err(Error::Syntax {
                    line: lineno,
                    msg: format!("malformed `{kw}` record"),
                })
            }
        }
    }
    b.finish()
}

/// A real function on the vertices of one graph, aligned with its ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction {
    graph_id: u64,
    values: Vec<f64>,
}

impl VertexFunction {
    pub fn new(g: &WeightedGraph, values: Vec<f64>) -> Result<Self> {
        if values.len() != g.len() {
            return Err(Error::LengthMismatch {
                expected: g.len(),
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            graph_id: g.id(),
            values,
        })
    }

    pub fn zeros(g: &WeightedGraph) -> Self {
        Self::constant(g, 0.0)
    }

    pub fn constant(g: &WeightedGraph, c: f64) -> Self {
        Self {
            graph_id: g.id(),
            values: vec![c; g.len()],
        }
    }

    /// Indicator of a single vertex.
    pub fn indicator(g: &WeightedGraph, name: &str) -> Result<Self> {
        let x = g.vertex_index(name)?;
        let mut values = vec![0.0; g.len()];
        values[x] = 1.0;
        Ok(Self {
            graph_id: g.id(),
            values,
        })
    }

    pub fn from_fn(g: &WeightedGraph, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::new(g, (0..g.len()).map(f).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn belongs_to(&self, g: &WeightedGraph) -> bool {
        self.graph_id == g.id()
    }

    pub fn check(&self, g: &WeightedGraph) -> Result<()> {
        if self.belongs_to(g) {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            graph_id: self.graph_id,
            values: self.values.iter().map(|v| c * v).collect(),
        }
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub(crate) fn from_raw(graph_id: u64, values: Vec<f64>) -> Self {
        Self { graph_id, values }
    }
}

/// Parses a function file (`value <vertex-id> <real>` lines). Vertices that
/// are not mentioned default to 0.
pub fn parse_function(g: &WeightedGraph, text: &str) -> Result<VertexFunction> {
    let mut values = vec![0.0; g.len()];
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let toks: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["value", id, v] => {
                let x = g.vertex_index(id).map_err(|e| at_line(lineno, e))?;
                if !seen.insert(x) {
                    return Err(at_line(lineno, Error::DuplicateVertex(id.to_string())));
                }
                values[x] = parse_real(v, lineno)?;
            }
            _ => {
                return Err(Error::Syntax {
                    line: lineno,
                    msg: "expected `value <vertex-id> <real>`".into(),
                })
            }
        }
    }
    VertexFunction::new(g, values)
}

/// Writes `<vertex> <value>` lines with 17 significant digits.
pub fn format_function(g: &WeightedGraph, f: &VertexFunction) -> String {
    let mut out = String::new();
    for (name, v) in g.names().iter().zip(f.values()) {
        let _ = writeln!(out, "{name} {}", crate::fmt17(*v));
    }
    out
}

/// The pair `(u, v)` of vertex functions on one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    pub u: VertexFunction,
    pub v: VertexFunction,
}

impl SystemState {
    pub fn new(u: VertexFunction, v: VertexFunction) -> Result<Self> {
        if u.graph_id != v.graph_id {
            return Err(Error::GraphMismatch);
        }
        Ok(Self { u, v })
    }

    pub fn zeros(g: &WeightedGraph) -> Self {
        Self {
            u: VertexFunction::zeros(g),
            v: VertexFunction::zeros(g),
        }
    }

    pub fn check(&self, g: &WeightedGraph) -> Result<()> {
        self.u.check(g)?;
        self.v.check(g)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            u: self.u.scaled(c),
            v: self.v.scaled(c),
        }
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }

    /// Concatenated `[u, v]` coordinates.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut x = self.u.values.clone();
        x.extend_from_slice(&self.v.values);
        x
    }

    pub(crate) fn from_flat(graph_id: u64, x: &[f64]) -> Self {
        let n = x.len() / 2;
        Self {
            u: VertexFunction::from_raw(graph_id, x[..n].to_vec()),
            v: VertexFunction::from_raw(graph_id, x[n..].to_vec()),
        }
    }
}
