use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use prom_core::graph::{self, WeightedGraph};
use prom_core::lti::{self, StateSpace, SystemFile};
use prom_core::mas::{self, GeibOptions, SweepOptions};
use prom_core::study::{self, CaseStudyConfig, SelfLoopPolicy};
use prom_core::{example, Error};
use serde::Serialize;

/// Projection-based reduction of LTI systems and consensus networks.
#[derive(Parser)]
#[command(name = "prom-reduce", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// H-infinity norm of a state-space system stored as JSON {"A","B","C","D"}.
    Norm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = lti::DEFAULT_RTOL)]
        rtol: f64,
    },
    /// Interface-invariant reduction of a consensus network.
    Reduce(ReduceArgs),
    /// Sweep the one-parameter projection family of the three-state example.
    Example {
        #[arg(long, default_value_t = 0.005)]
        step: f64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Seeded small-world (or sparse) case study: TBIB depth sweep plus random baselines.
    Casestudy(CaseStudyArgs),
    /// Exhaustive search for the bound-minimizing interface-invariant partition.
    Oracle {
        #[command(flatten)]
        network: NetworkArgs,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct NetworkArgs {
    /// Graph JSON {"n": int, "edges": [[u, v, w], ...]} with 1-based vertices.
    #[arg(long)]
    graph: PathBuf,
    /// Interface vertices, used as both inputs and outputs.
    #[arg(long, value_delimiter = ',', required = true)]
    interface: Vec<usize>,
    #[arg(long, default_value = "none")]
    self_loops: SelfLoopPolicy,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    network: NetworkArgs,
    #[arg(long, conflicts_with = "sweep", required_unless_present = "sweep")]
    r: Option<usize>,
    /// Range of target orders `lo:hi`, inclusive.
    #[arg(long)]
    sweep: Option<String>,
    /// Candidate edges: the BFS spanning tree or every edge.
    #[arg(long, default_value = "tree", value_parser = ["tree", "all"])]
    candidates: String,
    #[arg(long)]
    true_error: bool,
    /// Re-score remaining edges on the reduced model after each contraction.
    #[arg(long)]
    rescore: bool,
    /// Random-baseline trials per target order (0 disables).
    #[arg(long, default_value_t = 0)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct CaseStudyArgs {
    /// 20-vertex sparse random network instead of the small-world one.
    #[arg(long)]
    sparse: bool,
    #[arg(long)]
    n: Option<usize>,
    /// Edge count of the sparse network.
    #[arg(long, default_value_t = 23)]
    edges: usize,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 0.15)]
    beta: f64,
    #[arg(long)]
    interface_count: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_delimiter = ',')]
    depths: Option<Vec<f64>>,
    #[arg(long, default_value = "interface")]
    self_loops: SelfLoopPolicy,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InsufficientCandidates { .. } => 2,
            e if e.is_instability() => 3,
            _ => 1,
        };
        Self::new(code, e.to_string())
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::new(1, format!("cannot read {}: {e}", path.display())))
}

fn write(dir: &Path, name: &str, contents: &str) -> CliResult {
    fs::create_dir_all(dir).map_err(|e| Failure::new(1, format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::new(1, format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn load_graph(path: &Path) -> CliResult<WeightedGraph> {
    let text = read(path)?;
    let g = WeightedGraph::from_json(&text).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))?;
    g.validate()?;
    Ok(g)
}

fn load_model(args: &NetworkArgs) -> CliResult<mas::LccModel> {
    let g = load_graph(&args.graph)?;
    let g = study::apply_self_loops(&g, args.self_loops, &args.interface)?;
    Ok(mas::build_lcc(g, &args.interface, &args.interface)?)
}

fn cmd_norm(input: &Path, rtol: f64) -> CliResult {
    let text = read(input)?;
    let file: SystemFile = serde_json::from_str(&text).map_err(|e| Failure::new(1, format!("{}: {e}", input.display())))?;
    let sys = StateSpace::from_file(&file)?;
    let result = lti::hinf_norm(&sys, rtol).map_err(|e| {
        let code = if e.is_instability() { 2 } else { 1 };
        Failure::new(code, e.to_string())
    })?;
    print!("{}", to_json(&result));
    Ok(())
}

fn parse_sweep(range: &str, n: usize) -> CliResult<Vec<usize>> {
    let bad = || Failure::new(1, format!("--sweep expects lo:hi with 1 <= lo <= hi <= {}, got {range:?}", n.saturating_sub(1)));
    let (lo, hi) = range.split_once(':').ok_or_else(bad)?;
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo < 1 || lo > hi || hi >= n {
        return Err(bad());
    }
    Ok((lo..=hi).rev().collect())
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.6e}"))
}

fn cmd_reduce(args: &ReduceArgs) -> CliResult {
    let model = load_model(&args.network)?;
    let n = model.n();
    let candidates: Vec<usize> = match args.candidates.as_str() {
        "tree" => graph::spanning_tree(&model.graph)?,
        _ => (0..model.graph.edges.len()).collect(),
    };
    let orders = match (&args.sweep, args.r) {
        (Some(spec), _) => parse_sweep(spec, n)?,
        (None, Some(r)) => vec![r],
        (None, None) => unreachable!("clap requires --r or --sweep"),
    };
    let opts = SweepOptions {
        true_error: args.true_error,
        trials: args.trials,
        seed: args.seed,
        geib: GeibOptions { rescore: args.rescore },
    };
    let results = mas::depth_sweep(&model, &candidates, &orders, opts)?;
    for (res, _) in &results {
        println!(
            "r={} bound_norm={:.6e} error_norm={} selected_edges={}",
            res.r,
            res.bound_norm,
            fmt_opt(res.error_norm),
            res.selected_edges.len()
        );
    }
    if args.sweep.is_some() {
        let rows: Vec<_> = results.iter().map(|x| x.1).collect();
        let reports: Vec<_> = results.iter().map(|x| &x.0).collect();
        write(&args.out, "sweep.csv", &mas::sweep_csv(&rows))?;
        write(&args.out, "results.json", &to_json(&reports))?;
    } else {
        write(&args.out, "result.json", &to_json(&results[0].0))?;
    }
    write(&args.out, "candidates.csv", &mas::candidate_csv(&results[0].0.candidate_log))?;
    Ok(())
}

#[derive(Serialize)]
struct ExampleSummary {
    min_error: example::SweepPoint,
    min_bound: example::SweepPoint,
    model_norm: f64,
}

fn cmd_example(step: f64, out: &Path) -> CliResult {
    let sweep = example::sweep(step)?;
    let mut csv = String::from("alpha,error,bound\n");
    for p in &sweep.points {
        csv.push_str(&format!("{},{},{}\n", mas::fmt_f64(p.alpha), mas::fmt_f64(p.error), mas::fmt_f64(p.bound)));
    }
    write(out, "example.csv", &csv)?;
    let summary = ExampleSummary {
        min_error: sweep.min_error,
        min_bound: sweep.min_bound,
        model_norm: lti::hinf_norm(&example::system(), lti::DEFAULT_RTOL)?.value,
    };
    println!("min error {:.4} at alpha {:.3}", summary.min_error.error, summary.min_error.alpha);
    println!("min bound {:.4} at alpha {:.3}", summary.min_bound.bound, summary.min_bound.alpha);
    write(out, "example.json", &to_json(&summary))?;
    Ok(())
}

fn cmd_casestudy(args: &CaseStudyArgs) -> CliResult {
    let mut cfg = if args.sparse { study::sparse_config() } else { CaseStudyConfig::default() };
    cfg.k = args.k;
    cfg.beta = args.beta;
    cfg.seed = args.seed;
    cfg.self_loops = args.self_loops;
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(c) = args.interface_count {
        cfg.interface_count = c;
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(d) = &args.depths {
        cfg.depths = d.clone();
    }
    let (_, result) = if args.sparse { study::sparse(&cfg, args.edges)? } else { study::small_world(&cfg)? };
    for row in &result.rows {
        println!(
            "depth={:.2} r={} bound_norm={:.6e} error_norm={} mu_P={} mu_eps={}",
            row.depth,
            row.r,
            row.bound_norm,
            fmt_opt(row.error_norm),
            fmt_opt(row.mu_p),
            fmt_opt(row.mu_eps)
        );
    }
    write(&args.out, "casestudy.csv", &mas::sweep_csv(&result.rows))?;
    write(&args.out, "casestudy.json", &to_json(&result))?;
    write(&args.out, "graph.json", &to_json(&result.graph))?;
    Ok(())
}

fn cmd_oracle(network: &NetworkArgs, r: usize, out: Option<&Path>) -> CliResult {
    let model = load_model(network)?;
    let mut res = mas::brute_force_best_partition(&model, r)?;
    res.compute_true_error(&model)?;
    let json = to_json(&res);
    match out {
        Some(dir) => write(dir, "oracle.json", &json)?,
        None => print!("{json}"),
    }
    println!("r={} bound_norm={:.6e} error_norm={}", res.r, res.bound_norm, fmt_opt(res.error_norm));
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("PROM_REDUCE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("could not size the thread pool: {e}");
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    configure_threads();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Norm { input, rtol } => cmd_norm(input, *rtol),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Example { step, out } => cmd_example(*step, out),
        Command::Casestudy(args) => cmd_casestudy(args),
        Command::Oracle { network, r, out } => cmd_oracle(network, *r, out.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
