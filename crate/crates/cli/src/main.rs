mod verify;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use polylap::bounds::{compute_bounds, BaselinePair, BoundsReport};
use polylap::calculus;
use polylap::energy::Problem;
use polylap::graph::{format_function, parse_function};
use polylap::nonlinearity::Regime;
use polylap::problem::{example51_direct_baseline, indicator_anchor, load_problem, read};
use polylap::solver::{minimize, mountain_pass, results_csv, sweep_csv, sweep_lambda, Mode, SolveConfig};
use polylap::{fmt17, parse_graph, SystemState, VertexFunction, WeightedGraph};

/// Failure classes with stable exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad input or a failed check: exit 1.
    Invalid(String),
    /// Malformed command line: exit 2.
    Usage(String),
    /// A solver did not reach the residual tolerance: exit 3.
    NotConverged(String),
}

impl From<polylap::Error> for Failure {
    fn from(e: polylap::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Usage(_) => 2,
            Failure::NotConverged(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Usage(m) | Failure::NotConverged(m) => m,
        }
    }
}

type CmdResult = Result<(), Failure>;

#[derive(Parser)]
#[command(name = "polylap", version, about = "Poly-Laplacian systems on finite weighted graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    GammaDiag,
    GradLen,
    Laplacian,
    MGradLen,
    PLaplacian,
    PolyLaplacian,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Baseline {
    Direct,
    Graph,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    MountainPass,
    Minimize,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::MountainPass => Mode::MountainPass,
            ModeArg::Minimize => Mode::Minimize,
        }
    }
}

#[derive(clap::Args)]
struct AnchorArgs {
    /// Function file for the first anchor component.
    #[arg(long, requires = "v0")]
    u0: Option<PathBuf>,
    /// Function file for the second anchor component.
    #[arg(long, requires = "u0")]
    v0: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SolveArgs {
    /// Solver mode; defaults to mountain-pass for superlinear problems and
    /// minimize for sublinear ones.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Residual tolerance (sup norm of the gradient pair).
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Restarts for minimize mode.
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    /// Write the CSV table here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[command(flatten)]
    anchor: AnchorArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a graph file and print its statistics.
    CheckGraph { graph: PathBuf },
    /// Apply a difference operator to a function file.
    ApplyOp {
        graph: PathBuf,
        #[arg(value_enum)]
        op: Op,
        function: PathBuf,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
    },
    /// Sup, Lebesgue and Sobolev norms of a function file.
    Norms {
        graph: PathBuf,
        function: PathBuf,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Constant potential in the Sobolev norm.
        #[arg(long, default_value_t = 1.0)]
        h: f64,
        /// Extra Lebesgue exponents, comma separated.
        #[arg(long, value_delimiter = ',')]
        q: Vec<f64>,
    },
    /// Parameter thresholds of a superlinear problem.
    Bounds {
        problem: PathBuf,
        /// Where the anchor norms come from; defaults to `direct` for the
        /// built-in superlinear example and `graph` otherwise.
        #[arg(long, value_enum)]
        baseline: Option<Baseline>,
        #[command(flatten)]
        anchor: AnchorArgs,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Find critical points of a problem.
    Solve {
        problem: PathBuf,
        #[arg(long)]
        lambda: Option<f64>,
        #[command(flatten)]
        args: SolveArgs,
    },
    /// Solve independently at several parameter values.
    Sweep {
        problem: PathBuf,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        lambdas: Vec<f64>,
        #[arg(long, value_enum)]
        baseline: Option<Baseline>,
        #[command(flatten)]
        args: SolveArgs,
    },
    /// Reproduce a worked example: `5.1` or `5.2`.
    VerifyExample { which: String },
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::CheckGraph { graph } => check_graph(&graph),
        Command::ApplyOp {
            graph,
            op,
            function,
            m,
            p,
        } => apply_op(&graph, op, &function, m, p),
        Command::Norms {
            graph,
            function,
            m,
            p,
            h,
            q,
        } => norms(&graph, &function, m, p, h, &q),
        Command::Bounds {
            problem,
            baseline,
            anchor,
            csv,
        } => bounds(&problem, baseline, &anchor, csv.as_deref()),
        Command::Solve { problem, lambda, args } => solve(&problem, lambda, &args),
        Command::Sweep {
            problem,
            lambdas,
            baseline,
            args,
        } => sweep(&problem, &lambdas, baseline, &args),
        Command::VerifyExample { which } => match which.as_str() {
            "5.1" => verify::example51(),
            "5.2" => verify::example52(),
            other => Err(Failure::Usage(format!("unknown example `{other}`; expected 5.1 or 5.2"))),
        },
    }
}

fn load_graph(path: &Path) -> Result<WeightedGraph, Failure> {
    Ok(parse_graph(&read(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?)
}

fn load_function(g: &WeightedGraph, path: &Path) -> Result<VertexFunction, Failure> {
    parse_function(g, &read(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Problem, Failure> {
    load_problem(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_graph(path: &Path) -> CmdResult {
    let g = load_graph(path)?;
    let s = g.stats();
    println!("vertices       {}", s.vertex_count);
    println!("edges          {}", s.edge_count);
    println!("mu_min         {}", fmt17(s.mu_min));
    println!("total_measure  {}", fmt17(s.total_measure));
    println!("connected      {}", g.is_connected());
    for (x, name) in g.names().iter().enumerate() {
        println!("deg {name} {}", fmt17(g.degree_at(x)));
    }
    Ok(())
}

fn apply_op(graph: &Path, op: Op, function: &Path, m: usize, p: f64) -> CmdResult {
    let g = load_graph(graph)?;
    let f = load_function(&g, function)?;
    let out = match op {
        Op::GammaDiag => calculus::gamma(&g, &f, &f)?,
        Op::GradLen => calculus::grad_len(&g, &f)?,
        Op::Laplacian => calculus::laplacian(&g, &f)?,
        Op::MGradLen => calculus::m_grad_len(&g, m, &f)?,
        Op::PLaplacian => calculus::p_laplacian(&g, p, &f)?,
        Op::PolyLaplacian => calculus::poly_laplacian(&g, m, p, &f)?,
    };
    print!("{}", format_function(&g, &out));
    Ok(())
}

fn norms(graph: &Path, function: &Path, m: usize, p: f64, h: f64, qs: &[f64]) -> CmdResult {
    let g = load_graph(graph)?;
    let f = load_function(&g, function)?;
    let h = VertexFunction::constant(&g, h);
    println!("sup   {}", fmt17(calculus::sup_norm(&f)));
    println!("L^{p}   {}", fmt17(calculus::lp_norm(&g, p, &f)?));
    for q in qs {
        println!("L^{q}   {}", fmt17(calculus::lp_norm(&g, *q, &f)?));
    }
    println!("W^({m},{p})   {}", fmt17(calculus::sobolev_norm(&g, m, p, &h, &f)?));
    Ok(())
}

/// Anchor pair from `--u0/--v0`, else the scaled indicator at the first vertex.
fn anchor_for(prob: &Problem, args: &AnchorArgs) -> Result<SystemState, Failure> {
    match (&args.u0, &args.v0) {
        (Some(u), Some(v)) => {
            let g = prob.graph();
            Ok(SystemState::new(load_function(g, u)?, load_function(g, v)?)?)
        }
        _ => Ok(indicator_anchor(prob)?),
    }
}

fn baseline_for(prob: &Problem, choice: Option<Baseline>, anchor: &AnchorArgs) -> Result<BaselinePair, Failure> {
    let is_example = prob.raw_nonlinearity().name == "example51";
    let choice = choice.unwrap_or(if is_example && anchor.u0.is_none() {
        Baseline::Direct
    } else {
        Baseline::Graph
    });
    match choice {
        Baseline::Direct if is_example => Ok(example51_direct_baseline()),
        Baseline::Direct => Err(Failure::Invalid(
            "direct baseline values are only built in for the example51 nonlinearity; use --baseline graph".into(),
        )),
        Baseline::Graph => {
            let a = anchor_for(prob, anchor)?;
            Ok(BaselinePair::from_graph(prob.graph(), prob.params(), &a)?)
        }
    }
}

fn report_for(prob: &Problem, choice: Option<Baseline>, anchor: &AnchorArgs) -> Result<BoundsReport, Failure> {
    let base = baseline_for(prob, choice, anchor)?;
    let f = prob.raw_nonlinearity();
    Ok(compute_bounds(prob.graph(), prob.params(), &f.growth, f.delta, &base)?)
}

fn bounds(path: &Path, choice: Option<Baseline>, anchor: &AnchorArgs, csv: Option<&Path>) -> CmdResult {
    let prob = load(path)?;
    let rep = report_for(&prob, choice, anchor)?;
    print!("{rep}");
    if let Some(p) = csv {
        write_out(Some(p), &rep.to_csv())?;
    }
    Ok(())
}

fn config(prob: &Problem, args: &SolveArgs) -> Result<SolveConfig, Failure> {
    let mode = match args.mode {
        Some(m) => m.into(),
        None => match prob.nonlinearity().growth.regime {
            Regime::Superlinear => Mode::MountainPass,
            Regime::Sublinear => Mode::Minimize,
        },
    };
    let cfg = SolveConfig {
        mode,
        seed: args.seed,
        residual_tol: args.tol,
        restarts: args.restarts,
        ..Default::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn solve(path: &Path, lambda: Option<f64>, args: &SolveArgs) -> CmdResult {
    let mut prob = load(path)?;
    if let Some(l) = lambda {
        prob = prob.with_lambda(l)?;
    }
    let cfg = config(&prob, args)?;
    let results = match cfg.mode {
        Mode::MountainPass => vec![mountain_pass(&prob, &anchor_for(&prob, &args.anchor)?, &cfg)?],
        Mode::Minimize => minimize(&prob, &cfg)?,
    };
    let mut summary = String::new();
    for (i, r) in results.iter().enumerate() {
        let _ = writeln!(
            summary,
            "#{i} energy {} residual {} w_norm {} sup {} transfers {} converged {}",
            fmt17(r.energy),
            fmt17(r.residual_sup),
            fmt17(r.w_norm),
            fmt17(r.sup_norm),
            r.transfers,
            r.converged
        );
    }
    if args.csv.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    write_out(args.csv.as_deref(), &results_csv(&prob, &results))?;
    if results.is_empty() || results.iter().any(|r| !r.converged) {
        return Err(Failure::NotConverged(format!(
            "no converged nontrivial critical point within tolerance {}",
            cfg.residual_tol
        )));
    }
    Ok(())
}

fn sweep(path: &Path, lambdas: &[f64], choice: Option<Baseline>, args: &SolveArgs) -> CmdResult {
    let prob = load(path)?;
    let cfg = config(&prob, args)?;
    let report = match prob.raw_nonlinearity().growth.regime {
        Regime::Superlinear => Some(report_for(&prob, choice, &args.anchor)?),
        Regime::Sublinear => None,
    };
    let anchor = |p: &Problem| -> polylap::Result<SystemState> {
        match (&args.anchor.u0, &args.anchor.v0) {
            (Some(u), Some(v)) => {
                let g = p.graph();
                SystemState::new(parse_function(g, &read(u)?)?, parse_function(g, &read(v)?)?)
            }
            _ => indicator_anchor(p),
        }
    };
    let rows = sweep_lambda(&prob, lambdas, &cfg, report.as_ref(), &anchor)?;
    write_out(args.csv.as_deref(), &sweep_csv(&rows))?;
    let failed: Vec<String> = rows.iter().filter(|r| !r.converged()).map(|r| fmt17(r.lambda)).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::NotConverged(format!("no converged solution at lambda = {}", failed.join(", "))))
    }
}
