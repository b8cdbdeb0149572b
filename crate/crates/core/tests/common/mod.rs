//! Brute-force oracles shared by the integration suites. Everything here
//! works on a dense 0/1 adjacency matrix and never calls into the scorers
//! under test.

#![allow(dead_code)]

use linkbench::{Graph, NodeId, NodePair};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Dense = Vec<Vec<f64>>;

/// Erdős–Rényi style graph with `n` nodes and edge probability `p`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n as NodeId {
        for b in a + 1..n as NodeId {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn adjacency(g: &Graph) -> Dense {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for e in g.edges() {
        a[e.x() as usize][e.y() as usize] = 1.0;
        a[e.y() as usize][e.x() as usize] = 1.0;
    }
    a
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

/// Row-stochastic simple random walk matrix; isolated nodes hold their mass.
pub fn transition(g: &Graph) -> Dense {
    let a = adjacency(g);
    let n = a.len();
    let mut p = vec![vec![0.0; n]; n];
    for i in 0..n {
        let k: f64 = a[i].iter().sum();
        if k == 0.0 {
            p[i][i] = 1.0;
        } else {
            for j in 0..n {
                p[i][j] = a[i][j] / k;
            }
        }
    }
    p
}

pub fn matpow(m: &Dense, t: u32) -> Dense {
    let n = m.len();
    let mut r: Dense = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _ in 0..t {
        r = matmul(&r, m);
    }
    r
}

/// Reference score for one predictor token, from the dense adjacency matrix
/// by set enumeration.
pub struct Oracle {
    a: Dense,
    a2: Dense,
    a3: Dense,
    walk: Vec<Dense>,
    steps: Vec<u32>,
    m: f64,
}

impl Oracle {
    pub fn new(g: &Graph, steps: &[u32]) -> Self {
        let a = adjacency(g);
        let a2 = matmul(&a, &a);
        let a3 = matmul(&a2, &a);
        let p = transition(g);
        let walk = steps.iter().map(|&t| matpow(&p, t)).collect();
        Self {
            m: g.edge_count() as f64,
            a,
            a2,
            a3,
            walk,
            steps: steps.to_vec(),
        }
    }

    fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.a.len()).filter(|&u| self.a[v][u] == 1.0).collect()
    }

    pub fn score(&self, token: &str, p: NodePair, sigma: f64) -> f64 {
        let (x, y) = (p.x() as usize, p.y() as usize);
        let gx = self.neighbors(x);
        let gy = self.neighbors(y);
        let common: Vec<usize> = gx.iter().copied().filter(|z| gy.contains(z)).collect();
        let mut union = gx.clone();
        for z in &gy {
            if !union.contains(z) {
                union.push(*z);
            }
        }
        let cn = common.len() as f64;
        let (kx, ky) = (gx.len() as f64, gy.len() as f64);
        let div = |a: f64, b: f64| if b == 0.0 { 0.0 } else { a / b };
        let deg = |z: usize| self.neighbors(z).len() as f64;
        match token {
            "cn" => cn,
            "salton" => div(cn, (kx * ky).sqrt()),
            "jaccard" => div(cn, union.len() as f64),
            "sorensen" => div(2.0 * cn, kx + ky),
            "hpi" => div(cn, kx.min(ky)),
            "hdi" => div(cn, kx.max(ky)),
            "lhn" => div(cn, kx * ky),
            "aa" => common.iter().map(|&z| 1.0 / deg(z).ln()).sum(),
            "ra" => common.iter().map(|&z| 1.0 / deg(z)).sum(),
            "pa" => kx * ky,
            "lp" => self.a2[x][y] + sigma * self.a3[x][y],
            "lrw" => {
                if self.m == 0.0 {
                    return 0.0;
                }
                let (qx, qy) = (kx / (2.0 * self.m), ky / (2.0 * self.m));
                self.walk
                    .iter()
                    .map(|pt| qx * pt[x][y] + qy * pt[y][x])
                    .sum()
            }
            other => panic!("no oracle for {other}"),
        }
    }

    pub fn paths2(&self, p: NodePair) -> f64 {
        self.a2[p.x() as usize][p.y() as usize]
    }

    pub fn paths3(&self, p: NodePair) -> f64 {
        self.a3[p.x() as usize][p.y() as usize]
    }

    pub fn walk_matrix(&self, i: usize) -> &Dense {
        &self.walk[i]
    }

    pub fn steps(&self) -> &[u32] {
        &self.steps
    }
}

/// Non-edges by exhaustive scan.
pub fn brute_non_edges(g: &Graph) -> Vec<NodePair> {
    let a = adjacency(g);
    let n = a.len();
    let mut out = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            if a[x][y] == 0.0 {
                out.push(NodePair::new(x as NodeId, y as NodeId).unwrap());
            }
        }
    }
    out
}

/// Double-loop AUC with exact ties.
pub fn brute_auc(pos: &[f64], neg: &[f64]) -> f64 {
    let mut s = 0.0;
    for &p in pos {
        for &q in neg {
            if p > q {
                s += 1.0;
            } else if p == q {
                s += 0.5;
            }
        }
    }
    s / (pos.len() * neg.len()) as f64
}

/// Pearson chi-square statistic for observed counts against a common expectation.
pub fn chi_square(counts: &[u64], expected: f64) -> f64 {
    counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum()
}

/// Upper critical value of the chi-square distribution.
pub fn chi_square_critical(dof: f64, significance: f64) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    ChiSquared::new(dof)
        .unwrap()
        .inverse_cdf(1.0 - significance)
}
