use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Parser};

use modbc::bench::{bench_compare, compare_csv, Algorithm, BenchError, BenchResult};
use modbc::coarse::coarse_global;
use modbc::exact::{betweenness, brute_force_bc, ExactError};
use modbc::io::{
    bc_csv, coarse_csv, format_score, modular_csv, module_csv, parse_graph_file, serialize_graph,
};
use modbc::modular::{global_centrality, local_centrality, validate_precondition};
use modbc::synth::{generate_with_metadata, GenConfig, ModuleRule};
use modbc::{argmax, classify_edges, CentralityVector, Graph};

/// Betweenness centrality on modular weighted graphs.
#[derive(Debug, Parser)]
#[command(name = "centrality", version)]
#[command(group(ArgGroup::new("source").args(["input", "generate", "compare_sizes"]).required(true)))]
struct Cli {
    /// Graph file to read.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Generate a modular graph with N nodes.
    #[arg(long, value_name = "N")]
    generate: Option<usize>,

    /// Module count rule for generated graphs: sqrt, hundredth or an explicit count.
    #[arg(long, value_name = "RULE", default_value = "sqrt")]
    modules: ModuleRule,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Make external edges heavier than any intra-module shortest path.
    #[arg(long)]
    enforce_p: bool,

    /// Write the generated graph to this file.
    #[arg(long, value_name = "PATH", requires = "generate")]
    emit_graph: Option<PathBuf>,

    #[arg(long, default_value = "modular")]
    algo: Algorithm,

    /// Use the weight-proportional external credit in the coarse algorithm.
    #[arg(long)]
    coarse_weighted: bool,

    /// Report unordered-pair values (every score divided by two).
    #[arg(long)]
    halve: bool,

    /// Check that no intra-module shortest path leaves its module before running.
    #[arg(long)]
    validate: bool,

    /// Sources checked per module by --validate; 0 checks every node.
    #[arg(long, value_name = "K", default_value_t = 8)]
    validate_sources: usize,

    /// Centrality CSV destination; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Per-module external centrality CSV (modular algorithm only).
    #[arg(long, value_name = "PATH")]
    module_out: Option<PathBuf>,

    /// Append a timing row for the algorithm call.
    #[arg(long)]
    bench: bool,

    #[arg(long, value_name = "PATH", default_value = "bench.csv")]
    bench_out: PathBuf,

    /// Worker threads; defaults to available parallelism.
    #[arg(long, value_name = "T")]
    threads: Option<usize>,

    /// Timing comparison over these ascending sizes (comma separated).
    #[arg(long, value_name = "N,..", value_delimiter = ',')]
    compare_sizes: Vec<usize>,

    #[arg(
        long,
        value_name = "RULE,..",
        value_delimiter = ',',
        default_value = "sqrt"
    )]
    compare_rules: Vec<ModuleRule>,

    #[arg(
        long,
        value_name = "ALGO,..",
        value_delimiter = ',',
        default_value = "exact,modular"
    )]
    compare_algos: Vec<Algorithm>,

    #[arg(long, default_value_t = 3)]
    repeats: usize,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Input(_) => 1,
            CliError::Precondition(_) => 3,
        }
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::TooFewRepeats(_) | BenchError::UnsortedSizes | BenchError::Synth(_) => {
                CliError::Usage(e.to_string())
            }
            BenchError::Exact(e) => e.into(),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(io_err(p)),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(io_err(Path::new("<stdout>"))),
    }
}

fn append_bench_row(path: &Path, row: &BenchResult) -> Result<(), CliError> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(io_err(path))?;
    let mut text = String::new();
    if fresh {
        text.push_str(BenchResult::CSV_HEADER);
        text.push('\n');
    }
    text.push_str(&row.csv_row());
    text.push('\n');
    f.write_all(text.as_bytes()).map_err(io_err(path))
}

fn load_graph(cli: &Cli) -> Result<Graph, CliError> {
    if let Some(path) = &cli.input {
        let bytes = fs::read(path).map_err(io_err(path))?;
        return parse_graph_file(&bytes)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())));
    }
    let n = cli.generate.expect("clap enforces a graph source");
    let cfg = GenConfig::new(n, cli.modules, cli.seed).enforce_p(cli.enforce_p);
    let generated = generate_with_metadata(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(path) = &cli.emit_graph {
        fs::write(path, serialize_graph(&generated.graph, &generated.metadata))
            .map_err(io_err(path))?;
    }
    Ok(generated.graph)
}

fn halve_if(on: bool, v: CentralityVector) -> CentralityVector {
    if on {
        v.halved()
    } else {
        v
    }
}

struct Outcome {
    csv: String,
    module_csv: Option<String>,
    ranking: Vec<f64>,
    seconds: f64,
}

fn run_algorithm(cli: &Cli, g: &Graph) -> Result<Outcome, CliError> {
    let h = cli.halve;
    let start = Instant::now();
    let outcome = match cli.algo {
        Algorithm::Exact | Algorithm::Oracle => {
            let bc = if cli.algo == Algorithm::Exact {
                betweenness(g)
            } else {
                brute_force_bc(g)?
            };
            let seconds = start.elapsed().as_secs_f64();
            let bc = halve_if(h, bc);
            Outcome {
                csv: bc_csv(g, &bc),
                module_csv: None,
                ranking: bc.scores,
                seconds,
            }
        }
        Algorithm::Modular => {
            let p = classify_edges(g);
            let r = global_centrality(g, &p);
            let seconds = start.elapsed().as_secs_f64();
            let (lc, ec, gc) = (halve_if(h, r.lc), halve_if(h, r.ec), halve_if(h, r.gc));
            let ec_module: Vec<f64> = r
                .ec_module
                .iter()
                .map(|x| if h { x / 2.0 } else { *x })
                .collect();
            Outcome {
                csv: modular_csv(g, &lc, &ec, &gc),
                module_csv: Some(module_csv(&ec_module)),
                ranking: gc.scores,
                seconds,
            }
        }
        Algorithm::Coarse => {
            let p = classify_edges(g);
            let (lc, _) = local_centrality(g, &p);
            let mut r = coarse_global(g, &p, &lc, cli.coarse_weighted);
            let seconds = start.elapsed().as_secs_f64();
            if h {
                r.ic = r.ic.halved();
                r.coarse_gc = r.coarse_gc.halved();
                r.node_ec.iter_mut().for_each(|x| *x /= 2.0);
            }
            Outcome {
                csv: coarse_csv(g, &r),
                module_csv: None,
                ranking: r.coarse_gc.scores,
                seconds,
            }
        }
    };
    Ok(outcome)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if !cli.compare_sizes.is_empty() {
        let rows = bench_compare(
            &cli.compare_sizes,
            &cli.compare_rules,
            &cli.compare_algos,
            cli.repeats,
            cli.seed,
        )?;
        return write_output(cli.out.as_deref(), &compare_csv(&rows));
    }
    if cli.module_out.is_some() && cli.algo != Algorithm::Modular {
        return Err(CliError::Usage(
            "--module-out requires --algo modular".into(),
        ));
    }

    let g = load_graph(cli)?;
    if cli.validate {
        let p = classify_edges(&g);
        let sample = (cli.validate_sources > 0).then_some(cli.validate_sources);
        validate_precondition(&g, &p, sample).map_err(|e| CliError::Precondition(e.to_string()))?;
    }

    let outcome = run_algorithm(cli, &g)?;
    write_output(cli.out.as_deref(), &outcome.csv)?;
    if let (Some(path), Some(text)) = (&cli.module_out, &outcome.module_csv) {
        fs::write(path, text).map_err(io_err(path))?;
    }

    let top = argmax(&outcome.ranking);
    if let Some(v) = top {
        eprintln!(
            "{}: argmax node {v} score {}",
            cli.algo,
            format_score(outcome.ranking[v])
        );
    }
    if cli.bench {
        let row = BenchResult {
            algorithm: cli.algo,
            n: g.node_count(),
            k: g.module_count(),
            threads: rayon::current_num_threads(),
            wall_seconds: outcome.seconds.max(f64::MIN_POSITIVE),
            seed: cli.seed,
            argmax_node: top.unwrap_or(0),
            argmax_score: top.map_or(0.0, |v| outcome.ranking[v]),
        };
        append_bench_row(&cli.bench_out, &row)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
