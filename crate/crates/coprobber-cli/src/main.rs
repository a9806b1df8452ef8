//! Command-line front end: graph generation, metrics, transforms, exact
//! treewidth, cop numbers, match play with pluggable strategies, and the
//! verification harness.
//!
//! Exit codes: 0 success, 1 verification failure or data error, 2 usage
//! error, 3 resource cap exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use coprobber::engine::{self, default_horizon, verify_trace, Trace};
use coprobber::graph::metrics::{self, CycleLen};
use coprobber::graph::{generate, Graph};
use coprobber::solver::{self, SolverError};
use coprobber::strategy::{self, Caps, SubdivisionPlusOne};
use coprobber::transform::{self, TransformError, TransformResult};
use coprobber::treewidth::{self, TreeDecomposition, TreewidthError};
use coprobber::verify::{self, CorpusSpec};

#[derive(Parser)]
#[command(name = "coprobber", version, about = "Cops-and-Robber pursuit laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph; families: path:N cycle:N complete:N biclique:A:B
    /// star:LEAVES spider:L-L-L petersen gnp:N:P, joined by '+' for a
    /// disjoint union (e.g. petersen+complete:6)
    Gen {
        #[arg(long)]
        family: String,
        /// Seed for the random family
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Girth, circumference, longest induced path, component count
    Metrics {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = metrics::DEFAULT_METRICS_CAP)]
        metrics_cap: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Apply a transform: clique-sub, subdivide:R, hat, girth-lift:TARGET
    Transform {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        op: String,
        #[arg(long)]
        output: Option<PathBuf>,
        /// json emits the full result with the origin map; text/dot emit the
        /// output graph alone
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Exact treewidth with a witness decomposition
    Tw {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = treewidth::DEFAULT_TREEWIDTH_CAP)]
        tw_cap: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        /// Validate a decomposition JSON file against the graph instead
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Exact cop number (per component for disconnected inputs)
    Copnum {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = solver::DEFAULT_STATE_CAP)]
        state_cap: usize,
        /// Also print cop-win verdicts for k = 1..=MAX
        #[arg(long)]
        per_k: Option<usize>,
    },
    /// Play one match between named strategies and emit the trace
    Play {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// greedy | optimal | lead-cop:l=L | induced-cycle:l=L |
        /// bipartite:l=L | treedec | thm2:pattern=NAME |
        /// subdiv+1:base=FILE,r=R
        #[arg(long, default_value = "optimal")]
        cop: String,
        /// optimal | stay | evade
        #[arg(long, default_value = "optimal")]
        robber: String,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, default_value_t = solver::DEFAULT_STATE_CAP)]
        state_cap: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Replay and validate a recorded trace instead of playing
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Run the falsification harness; nonzero exit on any failure
    Verify {
        #[arg(long, default_value_t = 0xC0B5)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = solver::DEFAULT_STATE_CAP)]
        state_cap: usize,
        #[arg(long, default_value_t = treewidth::DEFAULT_TREEWIDTH_CAP)]
        tw_cap: usize,
        #[arg(long, default_value_t = metrics::DEFAULT_METRICS_CAP)]
        metrics_cap: usize,
        /// bounds | transforms | strategies | all
        #[arg(long, default_value = "all")]
        check: String,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Cop numbers of complete graphs with every edge subdivided n times;
    /// informational probe, no pass/fail semantics
    ExperimentSubdividedKn {
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long, default_value_t = solver::DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
}

enum CliError {
    Cap(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> ExitCode {
        match self {
            CliError::Cap(_) => ExitCode::from(3),
            CliError::Data(_) => ExitCode::from(1),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Cap(m) | CliError::Data(m) => write!(f, "{m}"),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match &e {
            SolverError::StateCapExceeded { .. } => CliError::Cap(e.to_string()),
            SolverError::Component { source, .. }
                if matches!(**source, SolverError::StateCapExceeded { .. }) =>
            {
                CliError::Cap(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<TreewidthError> for CliError {
    fn from(e: TreewidthError) -> Self {
        match e {
            TreewidthError::TooLarge { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<coprobber::GraphError> for CliError {
    fn from(e: coprobber::GraphError) -> Self {
        match e {
            coprobber::GraphError::TooLarge { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path)?;
    Ok(Graph::parse(&text)?)
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_family(spec: &str, seed: u64) -> Result<Graph, CliError> {
    let mut graph: Option<Graph> = None;
    for part in spec.split('+') {
        let fields: Vec<&str> = part.split(':').collect();
        let bad = || CliError::Data(format!("unknown or malformed family {part:?}"));
        let num = |i: usize| -> Result<usize, CliError> {
            fields.get(i).and_then(|t| t.parse().ok()).ok_or_else(bad)
        };
        let g = match fields[0] {
            "path" => generate::path(num(1)?)?,
            "cycle" => generate::cycle(num(1)?)?,
            "complete" | "k" => generate::complete(num(1)?)?,
            "biclique" | "complete-bipartite" => generate::complete_bipartite(num(1)?, num(2)?)?,
            "star" => generate::star(num(1)?)?,
            "petersen" => generate::petersen(),
            "spider" => {
                let legs: Option<Vec<usize>> = fields
                    .get(1)
                    .map(|t| t.split('-').map(|x| x.parse().ok()).collect())
                    .ok_or_else(bad)?;
                generate::spider(&legs.ok_or_else(bad)?)?
            }
            "gnp" => {
                let n = num(1)?;
                let p: f64 = fields.get(2).and_then(|t| t.parse().ok()).ok_or_else(bad)?;
                generate::gnp(n, p, seed)?
            }
            _ => return Err(bad()),
        };
        graph = Some(match graph {
            None => g,
            Some(acc) => generate::disjoint_union(&acc, &g),
        });
    }
    graph.ok_or_else(|| CliError::Data("empty family spec".into()))
}

fn render_graph(g: &Graph, format: OutputFormat) -> String {
    match format {
        OutputFormat::Dot => g.to_dot(),
        _ => g.render(),
    }
}

fn cyclelen_json(c: CycleLen) -> serde_json::Value {
    match c {
        CycleLen::Finite(k) => serde_json::json!(k),
        CycleLen::Infinite => serde_json::json!("inf"),
    }
}

fn build_cop(
    spec: &str,
    g: &Graph,
    k: usize,
    caps: Caps,
) -> Result<Box<dyn engine::CopStrategy>, CliError> {
    if let Some(rest) = spec.strip_prefix("subdiv+1:") {
        let mut base_path: Option<PathBuf> = None;
        let mut r: Option<usize> = None;
        for kv in rest.split(',') {
            match kv.split_once('=') {
                Some(("base", v)) => base_path = Some(PathBuf::from(v)),
                Some(("r", v)) => r = v.parse().ok(),
                _ => {}
            }
        }
        let base_path =
            base_path.ok_or_else(|| CliError::Data("subdiv+1 needs base=FILE".into()))?;
        let r = r.ok_or_else(|| CliError::Data("subdiv+1 needs r=R".into()))?;
        let base = read_graph(&base_path)?;
        let strat = SubdivisionPlusOne::new(&base, r, caps)?;
        return Ok(Box::new(strat));
    }
    strategy::build_cop_strategy(spec, g, k, caps).map_err(|e| match e {
        strategy::BuildError::Solver(s) => CliError::from(s),
        strategy::BuildError::Treewidth(t) => CliError::from(t),
        other => CliError::Data(other.to_string()),
    })
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Gen { family, seed, output, format } => {
            let g = parse_family(&family, seed)?;
            emit(&render_graph(&g, format), &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Metrics { input, metrics_cap, format } => {
            let g = read_graph(&input)?;
            let m = metrics::metrics_with_cap(&g, metrics_cap)?;
            let text = match format {
                OutputFormat::Json => serde_json::to_string_pretty(&serde_json::json!({
                    "girth": cyclelen_json(m.girth),
                    "circumference": cyclelen_json(m.circumference),
                    "longest_induced_path": m.longest_induced_path,
                    "component_count": m.component_count,
                }))
                .unwrap()
                    + "\n",
                _ => format!(
                    "girth {}\ncircumference {}\nlongest induced path {}\ncomponents {}\n",
                    m.girth, m.circumference, m.longest_induced_path, m.component_count
                ),
            };
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Transform { input, op, output, format } => {
            let g = read_graph(&input)?;
            let result: TransformResult = if op == "clique-sub" {
                transform::clique_substitution(&g)?
            } else if op == "hat" {
                transform::hat_construction(&g)?
            } else if let Some(r) = op.strip_prefix("subdivide:") {
                let r = r.parse().map_err(|_| CliError::Data(format!("bad subdivide count {r:?}")))?;
                transform::subdivide(&g, r)?
            } else if let Some(t) = op.strip_prefix("girth-lift:") {
                let t = t.parse().map_err(|_| CliError::Data(format!("bad girth target {t:?}")))?;
                transform::girth_lift(&g, t)?
            } else {
                return Err(CliError::Data(format!("unknown transform {op:?}")));
            };
            let text = match format {
                OutputFormat::Json => result.to_json() + "\n",
                other => render_graph(&result.output, other),
            };
            emit(&text, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Tw { input, tw_cap, format, check } => {
            let g = read_graph(&input)?;
            if let Some(path) = check {
                let decomposition = TreeDecomposition::from_json(&std::fs::read_to_string(&path)?)
                    .map_err(|e| CliError::Data(format!("bad decomposition file: {e}")))?;
                return match treewidth::validate_decomposition(&g, &decomposition) {
                    Ok(()) => {
                        println!("valid, width {}", decomposition.width());
                        Ok(ExitCode::SUCCESS)
                    }
                    Err(v) => {
                        println!("invalid: {v}");
                        Ok(ExitCode::from(1))
                    }
                };
            }
            let (width, decomposition) = treewidth::exact_treewidth(&g, tw_cap)?;
            match format {
                OutputFormat::Json => println!("{}", decomposition.to_json()),
                _ => {
                    println!("treewidth {width}");
                    for (i, bag) in decomposition.bags.iter().enumerate() {
                        println!("bag {i}: {bag:?}");
                    }
                    for &(a, b) in decomposition.tree.edges() {
                        println!("tree edge {a} {b}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Copnum { input, state_cap, per_k } => {
            let g = read_graph(&input)?;
            if let Some(max_k) = per_k {
                for comp in g.components() {
                    let (sub, _) = g.induced(&comp);
                    for k in 1..=max_k {
                        let (win, _) = solver::cop_win(&sub, k, state_cap)?;
                        println!(
                            "component {:?} k={k}: {}",
                            &comp[..comp.len().min(4)],
                            if win { "cop win" } else { "robber win" }
                        );
                    }
                }
            }
            let (value, detail) = solver::cop_number_detail(&g, state_cap)?;
            if detail.len() > 1 {
                for (comp, k) in &detail {
                    println!("component starting at {}: cop number {k}", comp[0]);
                }
            }
            println!("{value}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Play { input, k, cop, robber, horizon, state_cap, output, replay } => {
            let g = read_graph(&input)?;
            if let Some(path) = replay {
                let trace = Trace::from_json(&std::fs::read_to_string(&path)?)
                    .map_err(|e| CliError::Data(format!("bad trace file: {e}")))?;
                return match verify_trace(&g, &trace) {
                    Ok(()) => {
                        println!("trace valid: {:?}", trace.outcome);
                        Ok(ExitCode::SUCCESS)
                    }
                    Err(v) => {
                        println!("trace invalid: {v}");
                        Ok(ExitCode::from(1))
                    }
                };
            }
            let caps = Caps { state_cap, ..Caps::default() };
            let mut cop_strategy = build_cop(&cop, &g, k, caps)?;
            let mut robber_strategy = strategy::build_robber_strategy(&robber, &g, k, caps)
                .map_err(|e| match e {
                    strategy::BuildError::Solver(s) => CliError::from(s),
                    other => CliError::Data(other.to_string()),
                })?;
            let horizon = horizon.unwrap_or_else(|| default_horizon(&g, k));
            let trace = engine::play(&g, k, cop_strategy.as_mut(), robber_strategy.as_mut(), horizon)
                .map_err(|e| CliError::Data(e.to_string()))?;
            eprintln!("outcome: {:?}", trace.outcome);
            emit(&(trace.to_json() + "\n"), &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            seed,
            max_n,
            state_cap,
            tw_cap,
            metrics_cap,
            check,
            threads,
            format,
            output,
        } => {
            let spec = CorpusSpec {
                seed,
                exhaustive_max_n: max_n,
                caps: Caps { state_cap, treewidth_cap: tw_cap, metrics_cap },
                threads: threads.max(1),
                ..CorpusSpec::default()
            };
            let report = match check.as_str() {
                "bounds" => verify::check_bounds(&spec),
                "transforms" => verify::check_transform_monotonicity(&spec),
                "strategies" => verify::check_strategies(&spec),
                "all" => verify::run_all(&spec),
                other => return Err(CliError::Data(format!("unknown check {other:?}"))),
            };
            let text = match format {
                OutputFormat::Json => report.to_json() + "\n",
                _ => report.render_table(),
            };
            emit(&text, &output)?;
            if output.is_some() {
                eprintln!("{}", if report.ok() { "all checks passed" } else { "FAILURES" });
            }
            Ok(if report.ok() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::ExperimentSubdividedKn { n_min, n_max, state_cap } => {
            println!("{:>3} {:>10} {:>10} {:>8}", "n", "vertices", "cop(K_n)", "cop(sub)");
            for n in n_min..=n_max {
                let base = generate::complete(n)?;
                let base_cop = solver::cop_number(&base, state_cap)?;
                let sub = transform::subdivide(&base, n)?.output;
                let value = solver::cop_number(&sub, state_cap)?;
                println!("{n:>3} {:>10} {base_cop:>10} {value:>8}", sub.n());
            }
            println!("(informational probe: no pass/fail semantics)");
            Ok(ExitCode::SUCCESS)
        }
    }
}
