//! Similarity scorers for unconnected node pairs.
//!
//! Ten local indices built from degrees and common neighborhoods, plus the
//! local-path (LP) and local-random-walk (LRW) indices that look two and
//! three hops out. All scores are computed on the training graph.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, NodePair};
use crate::scalar::Scalar;

pub const DEFAULT_LP_SIGMA: f64 = 0.01;
pub const DEFAULT_LRW_STEPS: [u32; 2] = [2, 3];

#[derive(Debug, Clone, PartialEq)]
pub enum PredictorKind {
    CommonNeighbors,
    Salton,
    Jaccard,
    Sorensen,
    HubPromoted,
    HubDepressed,
    LeichtHolmeNewman,
    AdamicAdar,
    ResourceAllocation,
    PreferentialAttachment,
    /// `A^2 + sigma * A^3`.
    LocalPath {
        sigma: f64,
    },
    /// Superposed local random walk over the given step counts.
    LocalRandomWalk {
        steps: Vec<u32>,
    },
}

impl PredictorKind {
    /// The ten local predictors, in reporting order.
    pub fn local() -> Vec<PredictorKind> {
        use PredictorKind::*;
        vec![
            CommonNeighbors,
            Salton,
            Jaccard,
            Sorensen,
            HubPromoted,
            HubDepressed,
            LeichtHolmeNewman,
            AdamicAdar,
            ResourceAllocation,
            PreferentialAttachment,
        ]
    }

    /// All twelve predictors with default parameters.
    pub fn all() -> Vec<PredictorKind> {
        let mut v = Self::local();
        v.push(PredictorKind::LocalPath {
            sigma: DEFAULT_LP_SIGMA,
        });
        v.push(PredictorKind::LocalRandomWalk {
            steps: DEFAULT_LRW_STEPS.to_vec(),
        });
        v
    }

    /// Short lowercase token used on the command line and in reports.
    pub fn token(&self) -> &'static str {
        use PredictorKind::*;
        match self {
            CommonNeighbors => "cn",
            Salton => "salton",
            Jaccard => "jaccard",
            Sorensen => "sorensen",
            HubPromoted => "hpi",
            HubDepressed => "hdi",
            LeichtHolmeNewman => "lhn",
            AdamicAdar => "aa",
            ResourceAllocation => "ra",
            PreferentialAttachment => "pa",
            LocalPath { .. } => "lp",
            LocalRandomWalk { .. } => "lrw",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PredictorKind::LocalPath { sigma } if !(*sigma >= 0.0 && sigma.is_finite()) => {
                Err(Error::InvalidParameter(format!(
                    "lp sigma must be a finite value >= 0, got {sigma}"
                )))
            }
            PredictorKind::LocalRandomWalk { steps } if steps.is_empty() || steps.contains(&0) => {
                Err(Error::InvalidParameter(
                    "lrw steps must be a non-empty list of integers >= 1".into(),
                ))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for PredictorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictorKind::LocalPath { sigma } if *sigma != DEFAULT_LP_SIGMA => {
                write!(f, "lp:{sigma}")
            }
            PredictorKind::LocalRandomWalk { steps } if steps[..] != DEFAULT_LRW_STEPS => {
                let s: Vec<String> = steps.iter().map(|t| t.to_string()).collect();
                write!(f, "lrw:{}", s.join(","))
            }
            k => f.write_str(k.token()),
        }
    }
}

/// Parses `cn`, `ra`, ..., with optional parameters `lp:<sigma>` and
/// `lrw:<t1>,<t2>,...`.
impl FromStr for PredictorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use PredictorKind::*;
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        let bad = || Error::UnknownPredictor(s.to_string());
        let kind = match (name.to_ascii_lowercase().as_str(), param) {
            ("cn", None) => CommonNeighbors,
            ("salton", None) => Salton,
            ("jaccard", None) => Jaccard,
            ("sorensen", None) => Sorensen,
            ("hpi", None) => HubPromoted,
            ("hdi", None) => HubDepressed,
            ("lhn", None) => LeichtHolmeNewman,
            ("aa", None) => AdamicAdar,
            ("ra", None) => ResourceAllocation,
            ("pa", None) => PreferentialAttachment,
            ("lp", None) => LocalPath {
                sigma: DEFAULT_LP_SIGMA,
            },
            ("lp", Some(p)) => LocalPath {
                sigma: p.trim().parse().map_err(|_| bad())?,
            },
            ("lrw", None) => LocalRandomWalk {
                steps: DEFAULT_LRW_STEPS.to_vec(),
            },
            ("lrw", Some(p)) => LocalRandomWalk {
                steps: p
                    .split([',', '+'])
                    .map(|t| t.trim().parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// Scores aligned index-for-index with the pairs they were computed for.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector<T> {
    pub pairs: Vec<NodePair>,
    pub scores: Vec<T>,
    pub predictor: PredictorKind,
}

impl<T> ScoreVector<T> {
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

fn check_pair(g: &Graph, p: NodePair, index: usize) -> Result<()> {
    g.check_node(p.x())?;
    g.check_node(p.y())?;
    if g.contains(p.x(), p.y()) {
        return Err(Error::PairIsEdge {
            index,
            x: p.x() as usize,
            y: p.y() as usize,
        });
    }
    Ok(())
}

/// Calls `f` with every common neighbor of `a` and `b`, in increasing order.
#[inline]
fn for_each_common(a: &[NodeId], b: &[NodeId], mut f: impl FnMut(NodeId)) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                f(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

#[inline]
fn common_count(a: &[NodeId], b: &[NodeId]) -> usize {
    let mut c = 0;
    for_each_common(a, b, |_| c += 1);
    c
}

#[inline]
fn ratio<T: Scalar>(num: T, den: T) -> T {
    if den == T::zero() {
        T::zero()
    } else {
        num / den
    }
}

/// Number of length-3 walks from `x` to `y`.
fn paths3(g: &Graph, x: NodeId, y: NodeId) -> usize {
    let ny = g.neighbors(y);
    g.neighbors(x)
        .iter()
        .map(|&z| common_count(g.neighbors(z), ny))
        .sum()
}

/// Scores of the walk-free predictors. The pair must already be validated.
fn local_score<T: Scalar>(g: &Graph, x: NodeId, y: NodeId, kind: &PredictorKind) -> T {
    use PredictorKind::*;
    let (nx, ny) = (g.neighbors(x), g.neighbors(y));
    let kx = T::from_count(nx.len());
    let ky = T::from_count(ny.len());
    match kind {
        PreferentialAttachment => kx * ky,
        AdamicAdar => {
            let mut s = T::zero();
            for_each_common(nx, ny, |z| s = s + T::from_count(g.degree(z)).ln().recip());
            s
        }
        ResourceAllocation => {
            let mut s = T::zero();
            for_each_common(nx, ny, |z| s = s + T::from_count(g.degree(z)).recip());
            s
        }
        LocalPath { sigma } => {
            let a2 = T::from_count(common_count(nx, ny));
            let a3 = T::from_count(paths3(g, x, y));
            a2 + T::lit(*sigma) * a3
        }
        LocalRandomWalk { .. } => unreachable!("walk scores are computed from walk vectors"),
        _ => {
            let c = common_count(nx, ny);
            let cn = T::from_count(c);
            match kind {
                CommonNeighbors => cn,
                Salton => ratio(cn, (kx * ky).sqrt()),
                Jaccard => ratio(cn, T::from_count(nx.len() + ny.len() - c)),
                Sorensen => ratio(T::lit(2.0) * cn, kx + ky),
                HubPromoted => ratio(cn, kx.min(ky)),
                HubDepressed => ratio(cn, kx.max(ky)),
                LeichtHolmeNewman => ratio(cn, kx * ky),
                _ => unreachable!(),
            }
        }
    }
}

/// `sum over t in steps` of the t-step simple random walk distribution from
/// `source`. A walker on an isolated node stays there.
pub fn walk_distribution<T: Scalar>(g: &Graph, source: NodeId, steps: &[u32]) -> Vec<T> {
    let n = g.node_count();
    let max_t = steps.iter().copied().max().unwrap_or(0);
    let mut acc = vec![T::zero(); n];
    let mut cur = vec![T::zero(); n];
    let mut next = vec![T::zero(); n];
    cur[source as usize] = T::one();
    for t in 1..=max_t {
        next.iter_mut().for_each(|v| *v = T::zero());
        for v in 0..n {
            let mass = cur[v];
            if mass == T::zero() {
                continue;
            }
            let nb = g.neighbors(v as NodeId);
            if nb.is_empty() {
                next[v] = next[v] + mass;
                continue;
            }
            let share = mass / T::from_count(nb.len());
            for &w in nb {
                next[w as usize] = next[w as usize] + share;
            }
        }
        std::mem::swap(&mut cur, &mut next);
        // steps may repeat; each occurrence counts
        let hits = steps.iter().filter(|&&s| s == t).count();
        for _ in 0..hits {
            for (a, &c) in acc.iter_mut().zip(&cur) {
                *a = *a + c;
            }
        }
    }
    acc
}

/// Initial walker weight `k_x / 2|E|`.
fn walk_weight<T: Scalar>(g: &Graph, v: NodeId) -> T {
    if g.edge_count() == 0 {
        return T::zero();
    }
    T::from_count(g.degree(v)) / T::from_count(2 * g.edge_count())
}

/// Score of a single unconnected pair on graph `g`.
pub fn score_pair<T: Scalar>(g: &Graph, p: NodePair, kind: &PredictorKind) -> Result<T> {
    kind.validate()?;
    check_pair(g, p, 0)?;
    let (x, y) = (p.x(), p.y());
    Ok(match kind {
        PredictorKind::LocalRandomWalk { steps } => {
            let fwd = walk_weight::<T>(g, x) * walk_distribution::<T>(g, x, steps)[y as usize];
            let back = walk_weight::<T>(g, y) * walk_distribution::<T>(g, y, steps)[x as usize];
            fwd + back
        }
        _ => local_score(g, x, y, kind),
    })
}

/// Scores many pairs at once. Output is identical to mapping [`score_pair`]
/// over `pairs`, however the work is split across threads.
pub fn score_batch<T: Scalar>(
    g: &Graph,
    pairs: &[NodePair],
    kind: &PredictorKind,
) -> Result<ScoreVector<T>> {
    kind.validate()?;
    for (i, &p) in pairs.iter().enumerate() {
        check_pair(g, p, i)?;
    }
    let scores = match kind {
        PredictorKind::LocalRandomWalk { steps } => walk_batch(g, pairs, steps),
        _ => pairs
            .par_iter()
            .with_min_len(1024)
            .map(|p| local_score(g, p.x(), p.y(), kind))
            .collect(),
    };
    Ok(ScoreVector {
        pairs: pairs.to_vec(),
        scores,
        predictor: kind.clone(),
    })
}

// One walk vector per distinct source node and direction.
fn walk_batch<T: Scalar>(g: &Graph, pairs: &[NodePair], steps: &[u32]) -> Vec<T> {
    let half = |from: fn(&NodePair) -> NodeId, to: fn(&NodePair) -> NodeId| -> Vec<T> {
        let mut order: Vec<usize> = (0..pairs.len()).collect();
        order.sort_by_key(|&i| from(&pairs[i]));
        let groups: Vec<&[usize]> = order
            .chunk_by(|&a, &b| from(&pairs[a]) == from(&pairs[b]))
            .collect();
        let parts: Vec<Vec<(usize, T)>> = groups
            .par_iter()
            .map(|grp| {
                let src = from(&pairs[grp[0]]);
                let dist = walk_distribution::<T>(g, src, steps);
                let q = walk_weight::<T>(g, src);
                grp.iter()
                    .map(|&i| (i, q * dist[to(&pairs[i]) as usize]))
                    .collect()
            })
            .collect();
        let mut out = vec![T::zero(); pairs.len()];
        for (i, v) in parts.into_iter().flatten() {
            out[i] = v;
        }
        out
    };
    let fwd = half(NodePair::x, NodePair::y);
    let back = half(NodePair::y, NodePair::x);
    fwd.into_iter().zip(back).map(|(a, b)| a + b).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: NodeId, b: NodeId) -> NodePair {
        NodePair::new(a, b).unwrap()
    }

    fn path(n: u32) -> Graph {
        Graph::from_edges(n as usize, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    fn cycle4() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn s(g: &Graph, p: NodePair, token: &str) -> f64 {
        score_pair::<f64>(g, p, &token.parse().unwrap()).unwrap()
    }

    #[test]
    fn path3_single_shared_neighbor() {
        let g = path(3);
        let p = pair(0, 2);
        assert_eq!(s(&g, p, "cn"), 1.0);
        assert_eq!(s(&g, p, "salton"), 1.0);
        assert_eq!(s(&g, p, "jaccard"), 1.0);
        assert_eq!(s(&g, p, "pa"), 1.0);
    }

    #[test]
    fn cycle4_diagonal() {
        let g = cycle4();
        let p = pair(0, 2);
        assert_eq!(s(&g, p, "cn"), 2.0);
        assert_eq!(s(&g, p, "ra"), 1.0);
        assert!((s(&g, p, "aa") - 2.0 / 2f64.ln()).abs() < 1e-12);
        assert!((s(&g, p, "aa") - 2.8854).abs() < 1e-4);
        assert_eq!(s(&g, p, "lp"), 2.0);
        assert_eq!(s(&g, p, "pa"), 4.0);
    }

    #[test]
    fn path4_three_path() {
        let g = path(4);
        assert_eq!(s(&g, pair(0, 3), "cn"), 0.0);
        assert!((s(&g, pair(0, 3), "lp") - 0.01).abs() < 1e-15);
    }

    #[test]
    fn lrw_path3() {
        let g = path(3);
        assert!((s(&g, pair(0, 2), "lrw") - 0.25).abs() < 1e-15);
        assert!((s(&g, pair(0, 2), "lrw:2") - 0.25).abs() < 1e-15);
        assert_eq!(s(&g, pair(0, 2), "lrw:3"), 0.0);
    }

    #[test]
    fn isolated_nodes_score_zero() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        for k in PredictorKind::all() {
            let v = score_pair::<f64>(&g, pair(0, 3), &k).unwrap();
            assert_eq!(v, 0.0, "{k}");
        }
    }

    #[test]
    fn edge_pair_rejected() {
        let g = path(3);
        let err = score_pair::<f64>(&g, pair(0, 1), &PredictorKind::CommonNeighbors);
        assert!(matches!(err, Err(Error::PairIsEdge { .. })));
        let err = score_batch::<f64>(&g, &[pair(0, 2), pair(1, 2)], &PredictorKind::Salton);
        assert!(matches!(err, Err(Error::PairIsEdge { index: 1, .. })));
        let err = score_pair::<f64>(&g, pair(0, 9), &PredictorKind::Salton);
        assert!(matches!(err, Err(Error::NodeOutOfRange { .. })));
    }

    #[test]
    fn empty_batch() {
        let v = score_batch::<f64>(&path(3), &[], &PredictorKind::AdamicAdar).unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn batch_matches_pairs_on_cycle() {
        let g = cycle4();
        let pairs = [pair(0, 2), pair(1, 3)];
        for k in PredictorKind::all() {
            let b = score_batch::<f64>(&g, &pairs, &k).unwrap();
            for (p, v) in pairs.iter().zip(&b.scores) {
                assert_eq!(
                    score_pair::<f64>(&g, *p, &k).unwrap().to_bits(),
                    v.to_bits()
                );
            }
        }
    }

    #[test]
    fn f32_scores_agree_with_f64() {
        let g = cycle4();
        for k in PredictorKind::all() {
            let a = score_pair::<f32>(&g, pair(0, 2), &k).unwrap() as f64;
            let b = score_pair::<f64>(&g, pair(0, 2), &k).unwrap();
            assert!((a - b).abs() <= 1e-6 * b.abs().max(1.0), "{k}");
        }
    }

    #[test]
    fn tokens_round_trip() {
        for k in PredictorKind::all() {
            assert_eq!(k.to_string().parse::<PredictorKind>().unwrap(), k);
        }
        let k: PredictorKind = "lrw:3".parse().unwrap();
        assert_eq!(k.to_string(), "lrw:3");
        assert_eq!(k.to_string().parse::<PredictorKind>().unwrap(), k);
        let k: PredictorKind = "lp:0.5".parse().unwrap();
        assert_eq!(k, PredictorKind::LocalPath { sigma: 0.5 });
        assert!("katz".parse::<PredictorKind>().is_err());
        assert!("lp:-1".parse::<PredictorKind>().is_err());
        assert!("lrw:0".parse::<PredictorKind>().is_err());
        assert!("cn:2".parse::<PredictorKind>().is_err());
    }
}
