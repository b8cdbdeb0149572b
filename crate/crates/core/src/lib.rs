//! Link-prediction evaluation on sampled unobserved links.
//!
//! Instead of scoring all `n(n-1)/2 - m` unconnected pairs of a network, the
//! test set pairs the held-out probe links with a uniform sample of
//! unobserved links. This crate provides the graph representation, the
//! split and sampling protocol, twelve similarity predictors, AUC and
//! precision metrics, and a harness that runs repeated experiments.
//!
//! Scorers and metrics are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, which is what the harness uses.

pub mod datasets;
pub mod error;
pub mod graph;
pub mod harness;
pub mod metrics;
pub mod predictors;
pub mod protocol;
pub mod report;
pub mod scalar;
pub mod seed;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{generate_ba, giant_component, load_edge_list, Graph, NodeId, NodePair};
pub use harness::{run_experiment, ExperimentConfig, ExperimentReport, NetworkSource, ReportRow};
pub use metrics::{auc_exact, auc_sampled, precision_at_l, AucEstimate, LabeledScores};
pub use predictors::{score_batch, score_pair, PredictorKind, ScoreVector};
pub use protocol::{
    assemble_testset, count_unobserved, sample_unobserved, split, NegativeSample, SampleSize,
    SamplingStrategy, SplitResult, TestSet,
};
pub use report::{emit_report, parse_report, ReportFormat};
pub use scalar::Scalar;
pub use seed::derive_seed;
pub use stats::{stats, DistanceMode, NetworkStats};

/// Scores in double precision.
pub type Scores = ScoreVector<f64>;
/// Scores in single precision.
pub type Scores32 = ScoreVector<f32>;
pub type Labeled = LabeledScores<f64>;
pub type Labeled32 = LabeledScores<f32>;
