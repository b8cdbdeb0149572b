use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use linkbench::protocol::{count_unobserved, non_edges};
use linkbench::{
    emit_report, generate_ba, giant_component, graph::write_edge_list, run_experiment, score_batch,
    stats, DistanceMode, ExperimentConfig, Graph, NetworkSource, NodePair, PredictorKind,
    ReportFormat,
};

/// Largest network for which `predict --top` enumerates every non-edge.
const TOP_LIMIT: usize = 5000;

#[derive(Parser)]
#[command(
    name = "linkbench",
    version,
    about = "Link-prediction evaluation with sampled unobserved links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Replaces the config's alphas (repeatable)
        #[arg(long)]
        alpha: Vec<f64>,
        /// Replaces the config's predictors (repeatable)
        #[arg(long)]
        predictor: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Output file; standard output when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a Barabási–Albert network as an edge list
    Generate {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        m_attach: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print statistics of a network's giant component
    Info {
        /// `karate`, `ba:N:M[:SEED]` or an edge-list path
        network: String,
        #[arg(long, value_enum, default_value = "auto")]
        distance_mode: Distance,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Score node pairs on the full observed network
    Predict {
        network: String,
        #[arg(long)]
        predictor: String,
        /// File of `x y` lines to score
        #[arg(long, conflicts_with = "top", required_unless_present = "top")]
        pairs: Option<PathBuf>,
        /// Print the K highest-scoring non-edges
        #[arg(long)]
        top: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Distance {
    Auto,
    Exact,
    Sampled,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    let result = match cli.command {
        Command::Run {
            config,
            alpha,
            predictor,
            seed,
            reps,
            format,
            out,
        } => cmd_run(
            &config,
            alpha,
            predictor,
            seed,
            reps,
            format,
            out.as_deref(),
        ),
        Command::Generate {
            nodes,
            m_attach,
            seed,
            out,
        } => cmd_generate(nodes, m_attach, seed, out.as_deref()).map(|_| 0),
        Command::Info {
            network,
            distance_mode,
            seed,
        } => cmd_info(&network, distance_mode, seed).map(|_| 0),
        Command::Predict {
            network,
            predictor,
            pairs,
            top,
        } => cmd_predict(&network, &predictor, pairs.as_deref(), top).map(|_| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("LINKBENCH_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .with_context(|| format!("LINKBENCH_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_run(
    config: &Path,
    alphas: Vec<f64>,
    predictors: Vec<String>,
    seed: Option<u64>,
    reps: Option<usize>,
    format: Format,
    out: Option<&Path>,
) -> Result<u8> {
    let mut cfg = ExperimentConfig::from_path(config)?;
    if !alphas.is_empty() {
        cfg.alphas = alphas;
        cfg.negatives = None;
    }
    if !predictors.is_empty() {
        cfg.predictors = predictors
            .iter()
            .map(|p| p.parse::<PredictorKind>())
            .collect::<Result<_, _>>()?;
    }
    if let Some(s) = seed {
        cfg.master_seed = s;
    }
    if reps.is_some() {
        cfg.repetitions = reps;
    }
    let report = run_experiment(&cfg)?;
    let failures = report.failures();
    for (predictor, alpha, msg) in &failures {
        eprintln!("cell {predictor} alpha={alpha} failed: {msg}");
    }
    let rows = report.rows();
    if !rows.is_empty() {
        let format = match format {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        };
        emit_report(&rows, format, sink(out)?)?;
    }
    Ok(if failures.is_empty() { 0 } else { 2 })
}

fn cmd_generate(nodes: usize, m_attach: usize, seed: u64, out: Option<&Path>) -> Result<()> {
    let g = generate_ba(nodes, m_attach, seed)?;
    write_edge_list(&g, sink(out)?)?;
    let unobserved = count_unobserved(nodes as u64, g.edge_count() as u64)?;
    eprintln!(
        "nodes={nodes} edges={} unobserved={unobserved}",
        g.edge_count()
    );
    Ok(())
}

fn load(network: &str) -> Result<Graph> {
    NetworkSource::parse(network)?
        .load()
        .with_context(|| format!("cannot load {network}"))
}

/// Rounds to two decimals; `{:?}` keeps a trailing `.0` on whole numbers.
fn two_decimals(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

fn cmd_info(network: &str, mode: Distance, seed: u64) -> Result<()> {
    let g = giant_component(&load(network)?)?;
    let mode = match mode {
        Distance::Auto => DistanceMode::Auto,
        Distance::Exact => DistanceMode::Exact,
        Distance::Sampled => DistanceMode::Sampled,
    };
    let s = stats(&g, mode, seed)?;
    let mut out = io::stdout().lock();
    writeln!(out, "nodes={}", s.nodes)?;
    writeln!(out, "edges={}", s.edges)?;
    writeln!(out, "avg_degree={:?}", two_decimals(s.avg_degree))?;
    writeln!(out, "clustering={:?}", two_decimals(s.clustering))?;
    writeln!(out, "avg_distance={:?}", two_decimals(s.avg_distance))?;
    writeln!(out, "distance_is_estimate={}", s.distance_is_estimate)?;
    Ok(())
}

fn read_pairs(g: &Graph, path: &Path) -> Result<Vec<NodePair>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut pairs = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.len() != 2 {
            bail!(
                "{}:{}: expected two node labels, found {text:?}",
                path.display(),
                i + 1
            );
        }
        let (Some(a), Some(b)) = (g.node_by_label(tokens[0]), g.node_by_label(tokens[1])) else {
            eprintln!("warning: line {}: unknown node in {text:?}, skipped", i + 1);
            continue;
        };
        let Ok(p) = NodePair::new(a, b) else {
            eprintln!(
                "warning: line {}: {text:?} is not a pair of distinct nodes, skipped",
                i + 1
            );
            continue;
        };
        if g.has_edge(p)? {
            eprintln!(
                "warning: line {}: {text:?} is an existing edge, skipped",
                i + 1
            );
            continue;
        }
        pairs.push(p);
    }
    Ok(pairs)
}

fn cmd_predict(
    network: &str,
    predictor: &str,
    pairs: Option<&Path>,
    top: Option<usize>,
) -> Result<()> {
    let kind: PredictorKind = predictor.parse()?;
    let g = load(network)?;
    let (pairs, limit) = match (pairs, top) {
        (Some(path), _) => (read_pairs(&g, path)?, usize::MAX),
        (None, Some(k)) => {
            if g.node_count() > TOP_LIMIT {
                bail!(
                    "--top enumerates every non-edge and is limited to {TOP_LIMIT} nodes ({} given); \
                     use `run` with sampled unobserved links instead",
                    g.node_count()
                );
            }
            (non_edges(&g), k)
        }
        (None, None) => bail!("one of --pairs or --top is required"),
    };
    let scored = score_batch::<f64>(&g, &pairs, &kind)?;
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_by(|&a, &b| {
        scored.scores[b]
            .total_cmp(&scored.scores[a])
            .then(pairs[a].cmp(&pairs[b]))
    });
    let mut out = BufWriter::new(io::stdout().lock());
    for &i in order.iter().take(limit) {
        let p = pairs[i];
        writeln!(
            out,
            "{} {} {}",
            g.label(p.x()),
            g.label(p.y()),
            scored.scores[i]
        )?;
    }
    out.flush()?;
    Ok(())
}
