//! Repeated split / sample / score / measure experiments.
//!
//! Each repetition draws a fresh train/probe split and, per sample size, a
//! fresh set of unobserved links; every predictor is then scored on that same
//! test set. Random streams are derived from the master seed:
//!
//! | stream    | indices                                   |
//! |-----------|-------------------------------------------|
//! | split     | `[0, repetition]`                         |
//! | negatives | `[1, size index, repetition]`             |
//! | AUC draws | `[2, predictor index, size index, repetition]` |

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datasets;
use crate::error::{Error, Result};
use crate::graph::{generate_ba, giant_component, load_edge_list, Graph};
use crate::metrics::{
    auc_sampled, precision_at_l, AucEstimate, LabeledScores, DEFAULT_TIE_EPSILON,
};
use crate::predictors::{score_batch, PredictorKind};
use crate::protocol::{
    assemble_testset, sample_unobserved, split, unobserved_in, SampleSize, SamplingStrategy,
};
use crate::seed::derive_seed;

pub const DEFAULT_TRAIN_FRACTION: f64 = 0.9;
pub const DEFAULT_AUC_COMPARISONS: u64 = 100_000;
/// Networks with at least this many nodes default to fewer repetitions.
pub const LARGE_NETWORK_NODES: usize = 4_000;
pub const SMALL_NETWORK_REPETITIONS: usize = 100;
pub const LARGE_NETWORK_REPETITIONS: usize = 20;

const STREAM_SPLIT: u64 = 0;
const STREAM_NEGATIVES: u64 = 1;
const STREAM_AUC: u64 = 2;

/// Where the observed network comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum NetworkSource {
    Bundled(String),
    File(PathBuf),
    Ba {
        nodes: usize,
        m_attach: usize,
        seed: u64,
    },
}

impl NetworkSource {
    /// `karate`, `ba:<nodes>:<m_attach>[:<seed>]`, or a file path.
    pub fn parse(spec: &str) -> Result<Self> {
        if datasets::BUNDLED.contains(&spec) {
            return Ok(NetworkSource::Bundled(spec.to_string()));
        }
        if let Some(rest) = spec.strip_prefix("ba:") {
            let parts: Vec<&str> = rest.split(':').collect();
            let num = |s: &str| {
                s.parse::<u64>()
                    .map_err(|_| Error::Config(format!("network: bad BA spec `{spec}`")))
            };
            return match parts.as_slice() {
                [n, m] => Ok(NetworkSource::Ba {
                    nodes: num(n)? as usize,
                    m_attach: num(m)? as usize,
                    seed: 0,
                }),
                [n, m, s] => Ok(NetworkSource::Ba {
                    nodes: num(n)? as usize,
                    m_attach: num(m)? as usize,
                    seed: num(s)?,
                }),
                _ => Err(Error::Config(format!("network: bad BA spec `{spec}`"))),
            };
        }
        Ok(NetworkSource::File(PathBuf::from(spec)))
    }

    pub fn name(&self) -> String {
        match self {
            NetworkSource::Bundled(n) => n.clone(),
            NetworkSource::File(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
            NetworkSource::Ba {
                nodes, m_attach, ..
            } => format!("ba_{nodes}_{m_attach}"),
        }
    }

    /// The network as given, without component extraction.
    pub fn load(&self) -> Result<Graph> {
        match self {
            NetworkSource::Bundled(name) => datasets::bundled(name)
                .unwrap_or_else(|| Err(Error::Config(format!("network: unknown `{name}`")))),
            NetworkSource::File(path) => {
                let f = std::fs::File::open(path).map_err(|e| {
                    Error::Config(format!("network: cannot open {}: {e}", path.display()))
                })?;
                load_edge_list(std::io::BufReader::new(f))
            }
            NetworkSource::Ba {
                nodes,
                m_attach,
                seed,
            } => generate_ba(*nodes, *m_attach, *seed),
        }
    }
}

/// How the precision cutoff `L` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrecisionCutoff {
    /// `L = |E^P|`.
    #[default]
    ProbeSize,
    Fixed(usize),
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub network: NetworkSource,
    pub predictors: Vec<PredictorKind>,
    pub alphas: Vec<f64>,
    pub train_fraction: f64,
    /// `None` picks 100, or 20 for networks of 4000+ nodes.
    pub repetitions: Option<usize>,
    pub auc_comparisons: u64,
    pub cutoff: PrecisionCutoff,
    pub master_seed: u64,
    /// Absolute negative count; replaces the alpha axis when set.
    pub negatives: Option<u64>,
    pub tie_epsilon: f64,
    pub sampling: SamplingStrategy,
}

impl ExperimentConfig {
    pub fn new(network: NetworkSource) -> Self {
        Self {
            network,
            predictors: PredictorKind::all(),
            alphas: vec![1.0],
            train_fraction: DEFAULT_TRAIN_FRACTION,
            repetitions: None,
            auc_comparisons: DEFAULT_AUC_COMPARISONS,
            cutoff: PrecisionCutoff::ProbeSize,
            master_seed: 0,
            negatives: None,
            tie_epsilon: DEFAULT_TIE_EPSILON,
            sampling: SamplingStrategy::Auto,
        }
    }

    /// Parses the JSON config format.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut cfg = Self::new(NetworkSource::parse(&raw.network)?);
        if let Some(p) = raw.predictors {
            cfg.predictors = p
                .iter()
                .map(|t| {
                    t.parse()
                        .map_err(|e: Error| Error::Config(format!("predictors: {e}")))
                })
                .collect::<Result<_>>()?;
        }
        cfg.alphas = raw.alphas;
        if let Some(f) = raw.train_fraction {
            cfg.train_fraction = f;
        }
        cfg.repetitions = raw.repetitions;
        if let Some(a) = raw.auc_comparisons {
            cfg.auc_comparisons = a;
        }
        if let Some(l) = raw.l {
            cfg.cutoff = PrecisionCutoff::Fixed(l);
        }
        if let Some(s) = raw.seed {
            cfg.master_seed = s;
        }
        cfg.negatives = raw.negatives;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        // relative edge-list paths are relative to the config file
        if let NetworkSource::File(p) = &mut cfg.network {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.predictors.is_empty() {
            return Err(Error::Config("predictors must not be empty".into()));
        }
        for p in &self.predictors {
            p.validate()
                .map_err(|e| Error::Config(format!("predictors: {e}")))?;
        }
        if self.negatives.is_none() && self.alphas.is_empty() {
            return Err(Error::Config("alphas must not be empty".into()));
        }
        if self.alphas.iter().any(|&a| !(a > 0.0 && a <= 1.0)) {
            return Err(Error::Config("alphas must be in (0,1]".into()));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::Config("train_fraction must be in (0,1)".into()));
        }
        if self.repetitions == Some(0) {
            return Err(Error::Config("repetitions must be >= 1".into()));
        }
        if self.auc_comparisons == 0 {
            return Err(Error::Config("auc_comparisons must be >= 1".into()));
        }
        if self.cutoff == PrecisionCutoff::Fixed(0) {
            return Err(Error::Config("L must be >= 1".into()));
        }
        if self.negatives == Some(0) {
            return Err(Error::Config("negatives must be >= 1".into()));
        }
        if self.tie_epsilon.is_nan() || self.tie_epsilon < 0.0 {
            return Err(Error::Config("tie epsilon must be >= 0".into()));
        }
        Ok(())
    }

    pub fn repetitions_for(&self, nodes: usize) -> usize {
        self.repetitions.unwrap_or(if nodes < LARGE_NETWORK_NODES {
            SMALL_NETWORK_REPETITIONS
        } else {
            LARGE_NETWORK_REPETITIONS
        })
    }

    fn sizes(&self) -> Vec<SampleSize> {
        match self.negatives {
            Some(k) => vec![SampleSize::Count(k)],
            None => self.alphas.iter().map(|&a| SampleSize::Ratio(a)).collect(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    network: String,
    predictors: Option<Vec<String>>,
    alphas: Vec<f64>,
    train_fraction: Option<f64>,
    repetitions: Option<usize>,
    auc_comparisons: Option<u64>,
    #[serde(rename = "L")]
    l: Option<usize>,
    seed: Option<u64>,
    negatives: Option<u64>,
}

/// One aggregated result line: a (predictor, sample size) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub network: String,
    pub predictor: String,
    pub alpha: f64,
    #[serde(rename = "negatives")]
    pub negatives_drawn: u64,
    pub auc_mean: f64,
    pub auc_std: f64,
    pub precision_mean: f64,
    pub precision_std: f64,
    /// Wall time of scoring plus metric computation, per repetition.
    pub time_mean_s: f64,
    pub time_std_s: f64,
    pub repetitions: usize,
}

/// Measurements of one repetition of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RepetitionOutcome {
    pub auc: AucEstimate,
    pub precision: f64,
    pub seconds: f64,
    pub positives: usize,
    pub negatives: usize,
    /// Pair scores computed for this repetition.
    pub pairs_scored: usize,
}

#[derive(Debug, Clone)]
pub struct CellResult {
    pub predictor: PredictorKind,
    pub predictor_index: usize,
    pub size_index: usize,
    pub alpha: f64,
    pub outcome: std::result::Result<ReportRow, String>,
    pub repetitions: Vec<RepetitionOutcome>,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub network: String,
    pub nodes: usize,
    pub edges: usize,
    /// Ordered by predictor, then sample size.
    pub cells: Vec<CellResult>,
}

impl ExperimentReport {
    pub fn rows(&self) -> Vec<ReportRow> {
        self.cells
            .iter()
            .filter_map(|c| c.outcome.as_ref().ok().cloned())
            .collect()
    }

    /// `(predictor, alpha, message)` for every failed cell.
    pub fn failures(&self) -> Vec<(String, f64, String)> {
        self.cells
            .iter()
            .filter_map(|c| {
                c.outcome
                    .as_ref()
                    .err()
                    .map(|e| (c.predictor.to_string(), c.alpha, e.clone()))
            })
            .collect()
    }

    /// Per-repetition values as CSV, for checking the aggregates.
    pub fn write_repetitions<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "predictor",
            "alpha",
            "repetition",
            "auc",
            "precision",
            "seconds",
            "pairs_scored",
        ])?;
        for c in &self.cells {
            for (r, o) in c.repetitions.iter().enumerate() {
                w.write_record([
                    c.predictor.to_string(),
                    c.alpha.to_string(),
                    r.to_string(),
                    o.auc.value.to_string(),
                    o.precision.to_string(),
                    o.seconds.to_string(),
                    o.pairs_scored.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Mean and sample standard deviation; the deviation is 0 for one value.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Loads the network and extracts its giant component.
pub fn prepare_network(source: &NetworkSource) -> Result<Graph> {
    giant_component(&source.load()?)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let g = prepare_network(&cfg.network)?;
    Ok(run_on_graph(cfg, &cfg.network.name(), &g))
}

type CellOutcome = std::result::Result<RepetitionOutcome, String>;

/// Runs the protocol on an already prepared graph. Cells that fail keep
/// their error message; the rest of the grid still runs.
pub fn run_on_graph(cfg: &ExperimentConfig, network: &str, g: &Graph) -> ExperimentReport {
    let sizes = cfg.sizes();
    let reps = cfg.repetitions_for(g.node_count());
    let universe = unobserved_in(g);
    let cells_per_rep = sizes.len() * cfg.predictors.len();

    // outcomes[rep][size * predictors + predictor]
    let outcomes: Vec<Vec<CellOutcome>> = (0..reps)
        .into_par_iter()
        .map(|rep| run_repetition(cfg, g, &sizes, rep as u64))
        .collect();

    let mut cells = Vec::with_capacity(cells_per_rep);
    for (pi, kind) in cfg.predictors.iter().enumerate() {
        for (si, size) in sizes.iter().enumerate() {
            let alpha = match *size {
                SampleSize::Ratio(a) => a,
                SampleSize::Count(k) => k as f64 / universe.max(1) as f64,
            };
            let idx = si * cfg.predictors.len() + pi;
            let mut reps_ok = Vec::with_capacity(reps);
            let mut error = None;
            for rep in &outcomes {
                match &rep[idx] {
                    Ok(o) => reps_ok.push(o.clone()),
                    Err(e) => {
                        error.get_or_insert_with(|| e.clone());
                    }
                }
            }
            let outcome = match error {
                Some(e) => Err(e),
                None => Ok(aggregate(network, kind, alpha, &reps_ok)),
            };
            cells.push(CellResult {
                predictor: kind.clone(),
                predictor_index: pi,
                size_index: si,
                alpha,
                outcome,
                repetitions: reps_ok,
            });
        }
    }
    ExperimentReport {
        network: network.to_string(),
        nodes: g.node_count(),
        edges: g.edge_count(),
        cells,
    }
}

fn aggregate(
    network: &str,
    kind: &PredictorKind,
    alpha: f64,
    reps: &[RepetitionOutcome],
) -> ReportRow {
    let auc: Vec<f64> = reps.iter().map(|r| r.auc.value).collect();
    let prec: Vec<f64> = reps.iter().map(|r| r.precision).collect();
    let time: Vec<f64> = reps.iter().map(|r| r.seconds).collect();
    let (auc_mean, auc_std) = mean_std(&auc);
    let (precision_mean, precision_std) = mean_std(&prec);
    let (time_mean_s, time_std_s) = mean_std(&time);
    ReportRow {
        network: network.to_string(),
        predictor: kind.to_string(),
        alpha,
        negatives_drawn: reps.first().map_or(0, |r| r.negatives as u64),
        auc_mean,
        auc_std,
        precision_mean,
        precision_std,
        time_mean_s,
        time_std_s,
        repetitions: reps.len(),
    }
}

fn run_repetition(
    cfg: &ExperimentConfig,
    g: &Graph,
    sizes: &[SampleSize],
    rep: u64,
) -> Vec<CellOutcome> {
    let np = cfg.predictors.len();
    let fail_all = |e: String| vec![Err(e); sizes.len() * np];
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.master_seed, &[STREAM_SPLIT, rep]));
    let sp = match split(g, cfg.train_fraction, &mut rng) {
        Ok(s) => s,
        Err(e) => return fail_all(format!("split: {e}")),
    };
    let mut out = Vec::with_capacity(sizes.len() * np);
    for (si, &size) in sizes.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
            cfg.master_seed,
            &[STREAM_NEGATIVES, si as u64, rep],
        ));
        let test = sample_unobserved(g, size, cfg.sampling, &mut rng)
            .and_then(|neg| assemble_testset(&sp, &neg));
        let test = match test {
            Ok(t) => t,
            Err(e) => {
                out.extend((0..np).map(|_| Err(format!("sampling: {e}"))));
                continue;
            }
        };
        let pairs = test.pairs();
        for (pi, kind) in cfg.predictors.iter().enumerate() {
            let seed = derive_seed(cfg.master_seed, &[STREAM_AUC, pi as u64, si as u64, rep]);
            out.push(measure(
                cfg,
                &sp.train,
                &pairs,
                test.positives.len(),
                kind,
                seed,
            ));
        }
    }
    out
}

fn measure(
    cfg: &ExperimentConfig,
    train: &Graph,
    pairs: &[crate::graph::NodePair],
    positives: usize,
    kind: &PredictorKind,
    seed: u64,
) -> CellOutcome {
    let start = Instant::now();
    let scored = score_batch::<f64>(train, pairs, kind).map_err(|e| format!("scoring: {e}"))?;
    let pairs_scored = scored.len();
    let mut scores = scored.scores;
    let negative = scores.split_off(positives);
    let labeled = LabeledScores::new(scores, negative);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let auc = auc_sampled(&labeled, cfg.auc_comparisons, &mut rng, cfg.tie_epsilon)
        .map_err(|e| format!("auc: {e}"))?;
    let l = match cfg.cutoff {
        PrecisionCutoff::ProbeSize => positives,
        PrecisionCutoff::Fixed(l) => l,
    };
    let precision = precision_at_l(&labeled, l).map_err(|e| format!("precision: {e}"))?;
    let seconds = start.elapsed().as_secs_f64();
    Ok(RepetitionOutcome {
        auc,
        precision,
        seconds,
        positives,
        negatives: labeled.negative.len(),
        pairs_scored,
    })
}
