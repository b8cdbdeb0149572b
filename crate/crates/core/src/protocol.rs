//! Train/probe splitting and sampling of unobserved links.
//!
//! The test set of an evaluation is the probe set plus a uniform sample of
//! node pairs that are not edges of the observed graph. Sampling avoids
//! materializing the quadratic pair universe unless more than half of it is
//! requested.

use std::collections::HashSet;
use std::io::Write;

use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodePair};

/// Number of node pairs that are not edges: `n(n-1)/2 - m`.
pub fn count_unobserved(n: u64, m: u64) -> Result<u64> {
    let universe = (n as u128 * n.saturating_sub(1) as u128 / 2) as u64;
    universe
        .checked_sub(m)
        .ok_or(Error::TooManyEdges { n, m, universe })
}

/// Unobserved-link count of a graph.
pub fn unobserved_in(g: &Graph) -> u64 {
    count_unobserved(g.node_count() as u64, g.edge_count() as u64)
        .expect("simple graph cannot exceed the pair universe")
}

#[derive(Debug, Clone)]
pub struct SplitResult {
    /// Graph on all original nodes holding the training edges only.
    pub train: Graph,
    pub probe: Vec<NodePair>,
}

/// Probe-set size for a given edge count: `m - floor(fraction * m)`.
pub fn probe_size(edges: usize, train_fraction: f64) -> usize {
    // the epsilon absorbs products like 0.9 * 70 landing just under an integer
    let train = (train_fraction * edges as f64 + 1e-9).floor() as usize;
    edges - train.min(edges)
}

/// Uniformly random train/probe partition of the edges of `g`.
pub fn split<R: Rng + ?Sized>(g: &Graph, train_fraction: f64, rng: &mut R) -> Result<SplitResult> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "train_fraction must be in (0,1), got {train_fraction}"
        )));
    }
    let edges: Vec<NodePair> = g.edges().collect();
    if edges.len() < 2 {
        return Err(Error::InvalidParameter(
            "splitting needs at least two edges".into(),
        ));
    }
    let probe_len = probe_size(edges.len(), train_fraction);
    if probe_len == 0 {
        return Err(Error::InvalidParameter(format!(
            "train_fraction {train_fraction} leaves an empty probe set for {} edges",
            edges.len()
        )));
    }
    let mut in_probe = vec![false; edges.len()];
    let mut chosen = index::sample(rng, edges.len(), probe_len).into_vec();
    chosen.sort_unstable();
    for &i in &chosen {
        in_probe[i] = true;
    }
    let probe = chosen.iter().map(|&i| edges[i]).collect();
    let train_edges: Vec<NodePair> = edges
        .iter()
        .zip(&in_probe)
        .filter(|(_, &p)| !p)
        .map(|(e, _)| *e)
        .collect();
    let mut train = Graph::from_pairs(g.node_count(), &train_edges)?;
    if let Some(labels) = g.labels() {
        train = train.with_labels(labels.to_vec());
    }
    Ok(SplitResult { train, probe })
}

/// How many unobserved links to draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleSize {
    /// Fraction of the unobserved links, in `(0, 1]`.
    Ratio(f64),
    Count(u64),
}

impl SampleSize {
    /// Resolves to a link count against `universe` unobserved links.
    pub fn resolve(self, universe: u64) -> Result<u64> {
        match self {
            SampleSize::Ratio(alpha) => {
                if !(alpha > 0.0 && alpha <= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "alpha must be in (0,1], got {alpha}"
                    )));
                }
                let k = (alpha * universe as f64).round() as u64;
                Ok(k.clamp(1, universe.max(1)))
            }
            SampleSize::Count(k) => {
                if k == 0 {
                    return Err(Error::InvalidParameter(
                        "negative count must be at least 1".into(),
                    ));
                }
                if k > universe {
                    return Err(Error::SampleTooLarge {
                        requested: k,
                        available: universe,
                    });
                }
                Ok(k)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingStrategy {
    /// Rejection when at most half of the universe is requested, else enumeration.
    #[default]
    Auto,
    /// Draw random pairs and reject edges, self-pairs and repeats.
    Rejection,
    /// List every non-edge and keep a shuffled prefix.
    Enumerate,
}

#[derive(Debug, Clone)]
pub struct NegativeSample {
    pub links: Vec<NodePair>,
    /// Requested ratio, or the effective one when a count was requested.
    pub alpha: f64,
    pub universe_size: u64,
}

/// Draws distinct non-edges of `g` uniformly without replacement.
///
/// `g` must be the full observed graph so that probe links are excluded too.
pub fn sample_unobserved<R: Rng + ?Sized>(
    g: &Graph,
    size: SampleSize,
    strategy: SamplingStrategy,
    rng: &mut R,
) -> Result<NegativeSample> {
    let universe = unobserved_in(g);
    if universe == 0 {
        return Err(Error::NoUnobservedLinks);
    }
    let k = size.resolve(universe)?;
    let alpha = match size {
        SampleSize::Ratio(a) => a,
        SampleSize::Count(c) => c as f64 / universe as f64,
    };
    let strategy = match strategy {
        SamplingStrategy::Auto if 2 * k <= universe => SamplingStrategy::Rejection,
        SamplingStrategy::Auto => SamplingStrategy::Enumerate,
        s => s,
    };
    let links = match strategy {
        SamplingStrategy::Rejection => rejection_sample(g, k as usize, rng),
        _ => enumerate_sample(g, k as usize, rng),
    };
    Ok(NegativeSample {
        links,
        alpha,
        universe_size: universe,
    })
}

fn rejection_sample<R: Rng + ?Sized>(g: &Graph, k: usize, rng: &mut R) -> Vec<NodePair> {
    let n = g.node_count() as NodeId;
    let mut seen = HashSet::with_capacity(k);
    let mut links = Vec::with_capacity(k);
    while links.len() < k {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b || g.contains(a, b) {
            continue;
        }
        let p = NodePair::canonical(a, b);
        if seen.insert(p) {
            links.push(p);
        }
    }
    links
}

/// All non-edges of `g` in lexicographic order.
pub fn non_edges(g: &Graph) -> Vec<NodePair> {
    let n = g.node_count() as NodeId;
    let mut out = Vec::with_capacity(unobserved_in(g).min(usize::MAX as u64) as usize);
    for x in 0..n {
        let mut nb = g.neighbors(x).iter().peekable();
        for y in x + 1..n {
            while nb.next_if(|&&w| w < y).is_some() {}
            if nb.next_if_eq(&&y).is_none() {
                out.push(NodePair::canonical(x, y));
            }
        }
    }
    out
}

fn enumerate_sample<R: Rng + ?Sized>(g: &Graph, k: usize, rng: &mut R) -> Vec<NodePair> {
    let mut all = non_edges(g);
    let (chosen, _) = all.partial_shuffle(rng, k);
    chosen.to_vec()
}

/// Probe links (label 1) and sampled unobserved links (label 0).
#[derive(Debug, Clone)]
pub struct TestSet {
    pub positives: Vec<NodePair>,
    pub negatives: Vec<NodePair>,
}

impl TestSet {
    pub fn len(&self) -> usize {
        self.positives.len() + self.negatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Positives first, then negatives.
    pub fn pairs(&self) -> Vec<NodePair> {
        let mut v = Vec::with_capacity(self.len());
        v.extend_from_slice(&self.positives);
        v.extend_from_slice(&self.negatives);
        v
    }

    /// Debug dump: `x y label` per line, 1 for probe and 0 for sampled links.
    pub fn write<W: Write>(&self, g: &Graph, mut out: W) -> Result<()> {
        for (links, label) in [(&self.positives, 1), (&self.negatives, 0)] {
            for p in links {
                writeln!(out, "{} {} {}", g.label(p.x()), g.label(p.y()), label)?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

/// Combines a split with a negative sample, checking the two are disjoint
/// and that no test link is a training edge.
pub fn assemble_testset(split: &SplitResult, neg: &NegativeSample) -> Result<TestSet> {
    let probe: HashSet<NodePair> = split.probe.iter().copied().collect();
    for p in &split.probe {
        if split.train.contains(p.x(), p.y()) {
            return Err(Error::Overlap {
                x: p.x() as usize,
                y: p.y() as usize,
                reason: "is both a probe link and a training edge",
            });
        }
    }
    for p in &neg.links {
        if probe.contains(p) {
            return Err(Error::Overlap {
                x: p.x() as usize,
                y: p.y() as usize,
                reason: "is both a probe link and a sampled negative",
            });
        }
        if split.train.contains(p.x(), p.y()) {
            return Err(Error::Overlap {
                x: p.x() as usize,
                y: p.y() as usize,
                reason: "is a training edge sampled as negative",
            });
        }
    }
    Ok(TestSet {
        positives: split.probe.clone(),
        negatives: neg.links.clone(),
    })
}
