//! Problem files and the built-in seven-vertex fixtures.

use std::collections::HashMap;
use std::path::Path;

use crate::bounds::BaselinePair;
use crate::energy::{Problem, SystemParams, Variant};
use crate::error::{Error, Result};
use crate::graph::{at_line, parse_function, parse_graph, parse_real, strip_comment, SystemState, VertexFunction};
use crate::nonlinearity::builtin;

pub const EXAMPLE51_GRAPH: &str = include_str!("../fixtures/example51.graph");
pub const EXAMPLE51_PROBLEM: &str = include_str!("../fixtures/example51.problem");
pub const EXAMPLE52_PROBLEM: &str = include_str!("../fixtures/example52.problem");

enum HSpec {
    Const(f64),
    File(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, msg: msg.into() }
}

/// Parses a problem file. `load` resolves the paths it references (graph and
/// `h` files) to their contents.
pub fn parse_problem(text: &str, load: impl Fn(&str) -> Result<String>) -> Result<Problem> {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    let mut graph_path = None;
    let (mut m, mut p) = ([None; 2], [None; 2]);
    let mut h = [None, None];
    let mut lambda = None;
    let mut nonlinearity = None;
    let mut variant = None;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let toks: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        let Some(&key) = toks.first() else { continue };
        if seen.insert(key, ln).is_some() {
            return Err(syntax(ln, format!("duplicate key `{key}`")));
        }
        match (key, &toks[1..]) {
            ("graph", [path]) => graph_path = Some(path.to_string()),
            ("m1" | "m2", [v]) => {
                let k = usize::from(key == "m2");
                m[k] = Some(v.parse::<usize>().map_err(|_| syntax(ln, format!("`{key}` needs a positive integer")))?);
            }
            ("p1" | "p2", [v]) => p[usize::from(key == "p2")] = Some(parse_real(v, ln)?),
            ("h1" | "h2", ["const", v]) => h[usize::from(key == "h2")] = Some((HSpec::Const(parse_real(v, ln)?), ln)),
            ("h1" | "h2", ["file", path]) => h[usize::from(key == "h2")] = Some((HSpec::File(path.to_string()), ln)),
            ("lambda", [v]) => lambda = Some(parse_real(v, ln)?),
            ("nonlinearity", [name]) => nonlinearity = Some((name.to_string(), ln)),
            ("variant", [name]) => variant = Some((name.parse::<Variant>().map_err(|e| at_line(ln, e))?, ln)),
            ("graph" | "m1" | "m2" | "p1" | "p2" | "h1" | "h2" | "lambda" | "nonlinearity" | "variant", _) => {
                return Err(syntax(ln, format!("malformed `{key}` record")))
            }
            _ => return Err(syntax(ln, format!("unknown key `{key}`"))),
        }
    }
    let missing = |k: &str| syntax(text.lines().count().max(1), format!("missing key `{k}`"));
    let graph = parse_graph(&load(&graph_path.ok_or_else(|| missing("graph"))?)?)?;
    let mut hf = Vec::with_capacity(2);
    for (i, spec) in h.into_iter().enumerate() {
        let (spec, ln) = spec.ok_or_else(|| missing(if i == 0 { "h1" } else { "h2" }))?;
        hf.push(match spec {
            HSpec::Const(c) => VertexFunction::constant(&graph, c),
            HSpec::File(path) => parse_function(&graph, &load(&path)?).map_err(|e| at_line(ln, e))?,
        });
    }
    let h2 = hf.pop().expect("two entries");
    let h1 = hf.pop().expect("two entries");
    let params = SystemParams::new(
        &graph,
        (m[0].ok_or_else(|| missing("m1"))?, p[0].ok_or_else(|| missing("p1"))?, h1),
        (m[1].ok_or_else(|| missing("m2"))?, p[1].ok_or_else(|| missing("p2"))?, h2),
        lambda.ok_or_else(|| missing("lambda"))?,
    )?;
    let (name, ln) = nonlinearity.ok_or_else(|| missing("nonlinearity"))?;
    let raw = builtin(&name).map_err(|e| at_line(ln, e))?;
    match variant {
        Some((v, ln)) => Problem::new(graph, params, raw, v).map_err(|e| at_line(ln, e)),
        None => Problem::modified(graph, params, raw),
    }
}

/// Reads a problem file; referenced paths are relative to its directory.
pub fn load_problem(path: &Path) -> Result<Problem> {
    let text = read(path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_problem(&text, |rel| read(&dir.join(rel)))
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

fn builtin_loader(path: &str) -> Result<String> {
    match path {
        "example51.graph" => Ok(EXAMPLE51_GRAPH.to_string()),
        other => Err(Error::Io {
            path: other.into(),
            msg: "not a built-in fixture".into(),
        }),
    }
}

/// The superlinear seven-vertex problem at the given `lambda`.
pub fn example51_problem(lambda: f64) -> Result<Problem> {
    parse_problem(EXAMPLE51_PROBLEM, builtin_loader)?.with_lambda(lambda)
}

/// The sublinear problem on the same graph at the given `lambda`.
pub fn example52_problem(lambda: f64) -> Result<Problem> {
    parse_problem(EXAMPLE52_PROBLEM, builtin_loader)?.with_lambda(lambda)
}

/// Anchor `c e_x` in both components at the first vertex, with
/// `c_i = delta sqrt(mu_inf h_i_inf) / (2 sqrt(17) sqrt(max(1, h_i_sup)))`.
pub fn indicator_anchor(prob: &Problem) -> Result<SystemState> {
    let g = prob.graph();
    let p = prob.params();
    let name = &g.names()[0];
    let e = VertexFunction::indicator(g, name)?;
    let coeff = |h: &VertexFunction| {
        prob.delta() * (g.mu_min() * h.min()).sqrt() / (2.0 * 17f64.sqrt() * h.max().max(1.0).sqrt())
    };
    SystemState::new(e.scaled(coeff(&p.h1)), e.scaled(coeff(&p.h2)))
}

/// Baseline norms `(15/68, 1/34)` for both components, taken verbatim
/// rather than evaluated on the fixture graph (where the gradient part
/// evaluates to `6/68`).
pub fn example51_direct_baseline() -> BaselinePair {
    BaselinePair::direct(15.0 / 68.0, 1.0 / 34.0, 15.0 / 68.0, 1.0 / 34.0).expect("positive constants")
}
