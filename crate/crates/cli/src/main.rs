//! `ftb`: build, query and inspect fusion tablebases.
//!
//! Exit codes: 0 success, 2 target not in table, 3 unreadable input,
//! 4 resource limit hit during a build, 1 anything else.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde_json::{json, Value};

use fusion_tablebase::bounds::{climb, ns_min, subgraph_lower_bound};
use fusion_tablebase::codes::{best_code, search_codes, Logical};
use fusion_tablebase::graph::{read_graph, write_graph6, Graph};
use fusion_tablebase::query::{construct, replay, QueryError};
use fusion_tablebase::tablebase::{BuildError, BuildOptions, CheckMode, Tablebase};

#[derive(Parser, Debug)]
#[command(name = "ftb", version, about = "Minimum-fusion tablebase for photonic graph states")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "FTB_THREADS")]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a table from caterpillar seeds with up to M initial qubits.
    Build(BuildArgs),
    /// Find a minimum-fusion construction for a graph.
    Query {
        #[arg(long)]
        table: PathBuf,
        /// graph6 or JSON file, `-` for stdin.
        #[arg(long)]
        graph: PathBuf,
        /// Skip replaying the protocol through the simulator.
        #[arg(long)]
        no_verify: bool,
    },
    /// Orbit and graph counts of a saved table.
    Stats {
        #[arg(long)]
        table: PathBuf,
        /// Replay every stored fusion link while loading.
        #[arg(long)]
        deep: bool,
    },
    /// Static-qubit and fusion-count bounds for a graph.
    Bounds {
        #[arg(long)]
        graph: PathBuf,
        /// Static-qubit baseline for the climb bound.
        #[arg(long, default_value_t = 1)]
        ns: usize,
        /// Also report the induced-subgraph lower bound from this table.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Loss-tolerant graph codes.
    #[command(subcommand)]
    Codes(CodesCommand),
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(long)]
    max_qubits: usize,
    #[arg(long)]
    out: PathBuf,
    /// Stop after this many stored graphs.
    #[arg(long)]
    max_graphs: Option<u64>,
    /// Stop once the estimated footprint passes this many MiB.
    #[arg(long)]
    memory_mib: Option<u64>,
    #[arg(long)]
    max_depth: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum CodesCommand {
    /// Rank table graphs as code progenitors.
    Search {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_nodes: usize,
        #[arg(long)]
        budget: u32,
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
    /// Loss curves of one progenitor and encoding vertex.
    Eval {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        delta: usize,
    },
}

/// Failures that map to a specific exit code.
#[derive(Debug)]
enum Failure {
    NotInTable(Value),
    Parse(String),
    Limit(Value),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::NotInTable(_) => 2,
            Failure::Parse(_) => 3,
            Failure::Limit(_) => 4,
            Failure::Other(_) => 1,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let format = cli.format;
    let started = Instant::now();
    let result = run(cli.command);
    let meta = json!({
        "elapsed_ms": started.elapsed().as_millis() as u64,
        "finished_unix_secs": SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        "version": env!("CARGO_PKG_VERSION"),
    });
    match result {
        Ok(body) => {
            emit(format, body, meta);
            ExitCode::SUCCESS
        }
        Err(f) => {
            let code = f.code();
            match f {
                Failure::NotInTable(body) | Failure::Limit(body) => emit(format, body, meta),
                Failure::Parse(msg) => eprintln!("error: {msg}"),
                Failure::Other(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(code)
        }
    }
}

fn emit(format: Format, mut body: Value, meta: Value) {
    let mut out = io::stdout().lock();
    match format {
        Format::Json => {
            body["metadata"] = meta;
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("values serialize"));
        }
        Format::Text => {
            let _ = writeln!(out, "{}", text(&body, 0));
        }
    }
}

/// Indented `key: value` rendering of a JSON document.
fn text(v: &Value, indent: usize) -> String {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::Object(_) => format!("{pad}{k}:\n{}", text(v, indent + 1)),
                Value::Array(a) if a.iter().any(|x| x.is_object()) => {
                    let items: Vec<String> = a.iter().map(|x| text(x, indent + 1)).collect();
                    format!("{pad}{k}:\n{}", items.join(&format!("\n{pad}  --\n")))
                }
                _ => format!("{pad}{k}: {}", scalar(v)),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        _ => format!("{pad}{}", scalar(v)),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(scalar).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn read_input(path: &Path) -> Result<Graph, Failure> {
    let bytes = if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| Failure::Parse(format!("stdin: {e}")))?;
        buf
    } else {
        fs::read(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?
    };
    read_graph(&bytes)
        .map(|(g, _)| g)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load(path: &Path, mode: CheckMode) -> Result<Tablebase, Failure> {
    info!("loading {}", path.display());
    Tablebase::load(path, mode)
        .with_context(|| format!("loading table {}", path.display()))
        .map_err(Failure::Other)
}

fn run(command: Command) -> Result<Value, Failure> {
    match command {
        Command::Build(args) => build(args),
        Command::Query { table, graph, no_verify } => {
            let target = read_input(&graph)?;
            let tb = load(&table, CheckMode::Fast)?;
            query(&tb, &target, !no_verify)
        }
        Command::Stats { table, deep } => {
            let tb = load(&table, if deep { CheckMode::Deep } else { CheckMode::Fast })?;
            Ok(stats_json(&tb))
        }
        Command::Bounds { graph, ns, table } => {
            let g = read_input(&graph)?;
            let tb = table.map(|t| load(&t, CheckMode::Fast)).transpose()?;
            Ok(bounds_json(&g, ns, tb.as_ref()))
        }
        Command::Codes(CodesCommand::Search {
            table,
            max_nodes,
            budget,
            limit,
        }) => {
            let tb = load(&table, CheckMode::Fast)?;
            let found = search_codes(&tb, max_nodes, budget, limit);
            Ok(json!({
                "max_nodes": max_nodes,
                "budget": budget,
                "table_max_qubits": tb.max_initial_qubits(),
                "codes": found,
            }))
        }
        Command::Codes(CodesCommand::Eval { graph, delta }) => {
            let g = read_input(&graph)?;
            let (code, loss) = best_code(&g, delta).context("building the code")?;
            let curves: Vec<Value> = Logical::ALL
                .iter()
                .zip(&loss.curves)
                .zip(loss.thresholds)
                .map(|((l, c), t)| json!({"logical": l.to_string(), "coefficients": c.coefficients, "threshold": t}))
                .collect();
            Ok(json!({
                "progenitor": write_graph6(&g),
                "delta": delta,
                "i_star": code.i_star,
                "physical_qubits": code.physical,
                "curves": curves,
                "threshold": loss.threshold(),
                "worst_logical": loss.worst().to_string(),
            }))
        }
    }
}

fn build(args: BuildArgs) -> Result<Value, Failure> {
    let options = BuildOptions {
        max_graphs: args.max_graphs,
        memory_limit_bytes: args.memory_mib.map(|m| m << 20),
        max_depth: args.max_depth,
        ..BuildOptions::default()
    };
    info!("building M={}", args.max_qubits);
    let save = |tb: &Tablebase| {
        tb.save(&args.out)
            .with_context(|| format!("writing {}", args.out.display()))
    };
    match Tablebase::build(args.max_qubits, &options) {
        Ok(tb) => {
            save(&tb)?;
            let mut v = stats_json(&tb);
            v["out"] = json!(args.out.display().to_string());
            Ok(v)
        }
        Err(BuildError::ResourceLimit { limit, depth, partial }) => {
            save(&partial)?;
            let mut v = stats_json(&partial);
            v["out"] = json!(args.out.display().to_string());
            v["limit"] = json!({"kind": format!("{limit:?}"), "depth": depth});
            Err(Failure::Limit(v))
        }
        Err(e @ BuildError::InvalidMaxQubits(_)) => Err(Failure::Parse(e.to_string())),
        Err(e) => Err(Failure::Other(e.into())),
    }
}

fn query(tb: &Tablebase, target: &Graph, verify: bool) -> Result<Value, Failure> {
    match construct(tb, target) {
        Ok(p) => {
            let verified = if verify {
                replay(&p, target).map_err(|e| anyhow::anyhow!("protocol failed verification: {e}"))?;
                Some(true)
            } else {
                None
            };
            Ok(json!({
                "found": true,
                "target": write_graph6(target),
                "depth": p.depth,
                "steps": p.to_string(),
                "protocol": p.to_json_value(),
                "verified": verified,
            }))
        }
        Err(QueryError::NotInTable) => {
            let b = subgraph_lower_bound(tb, target);
            Err(Failure::NotInTable(json!({
                "found": false,
                "target": write_graph6(target),
                "table_max_qubits": tb.max_initial_qubits(),
                "subgraph_lower_bound": b,
            })))
        }
        Err(e) => Err(Failure::Other(e.into())),
    }
}

fn stats_json(tb: &Tablebase) -> Value {
    let meta = tb.meta();
    json!({
        "complete": meta.complete,
        "format_version": meta.format_version,
        "stats": tb.stats(),
    })
}

fn bounds_json(g: &Graph, ns: usize, tb: Option<&Tablebase>) -> Value {
    let n = ns_min(g);
    let c = climb(g, ns);
    let mut v = json!({
        "graph": write_graph6(g),
        "vertices": g.n(),
        "ns_min": {"value": n.value, "exact": n.exact, "order": n.profile.order, "heights": n.profile.heights},
        "climb": {"ns": ns, "value": c.value, "exact": c.exact, "order": c.profile.order, "heights": c.profile.heights},
    });
    if let Some(tb) = tb {
        v["depth"] = json!(tb.depth_of(g));
        v["subgraph_lower_bound"] = json!(subgraph_lower_bound(tb, g));
    }
    v
}
