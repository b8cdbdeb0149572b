//! Immutable undirected simple graphs stored in compressed sparse row form.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::io::BufRead;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Dense node identifier in `[0, n)`.
pub type NodeId = u32;

/// An unordered node pair stored as `x < y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodePair {
    x: NodeId,
    y: NodeId,
}

impl NodePair {
    /// Builds the canonical pair; fails when both endpoints are the same node.
    pub fn new(a: NodeId, b: NodeId) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Self { x: a, y: b }),
            std::cmp::Ordering::Greater => Ok(Self { x: b, y: a }),
            std::cmp::Ordering::Equal => Err(Error::SelfPair(a as usize)),
        }
    }

    /// Caller guarantees `a != b`.
    pub(crate) fn canonical(a: NodeId, b: NodeId) -> Self {
        debug_assert_ne!(a, b);
        if a < b {
            Self { x: a, y: b }
        } else {
            Self { x: b, y: a }
        }
    }

    pub fn x(&self) -> NodeId {
        self.x
    }

    pub fn y(&self) -> NodeId {
        self.y
    }
}

impl fmt::Display for NodePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Undirected simple graph. Neighbor lists are sorted and duplicate free.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph on `n` nodes. Self-loops are dropped and repeated edges
    /// collapse into one.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (a, b) in edges {
            for v in [a, b] {
                if v as usize >= n {
                    return Err(Error::NodeOutOfRange { id: v as usize, n });
                }
            }
            if a == b {
                continue;
            }
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for mut list in adj {
            list.sort_unstable();
            list.dedup();
            targets.extend_from_slice(&list);
            offsets.push(targets.len());
        }
        Ok(Self {
            offsets,
            targets,
            labels: None,
        })
    }

    pub fn from_pairs(n: usize, pairs: &[NodePair]) -> Result<Self> {
        Self::from_edges(n, pairs.iter().map(|p| (p.x, p.y)))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.node_count(), "one label per node");
        self.labels = Some(labels);
        self
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Original identifier of `v`, or its dense id when the graph is unlabeled.
    pub fn label(&self, v: NodeId) -> String {
        match &self.labels {
            Some(l) => l[v as usize].clone(),
            None => v.to_string(),
        }
    }

    /// Looks up a node by its original identifier.
    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        match &self.labels {
            Some(l) => l.iter().position(|s| s == label).map(|i| i as NodeId),
            None => label
                .parse::<usize>()
                .ok()
                .filter(|&v| v < self.node_count())
                .map(|v| v as NodeId),
        }
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if (v as usize) < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                id: v as usize,
                n: self.node_count(),
            })
        }
    }

    /// Edge membership by binary search on the shorter neighbor list.
    pub fn has_edge(&self, p: NodePair) -> Result<bool> {
        self.check_node(p.x)?;
        self.check_node(p.y)?;
        Ok(self.contains(p.x, p.y))
    }

    /// Unchecked membership test for in-range ids.
    #[inline]
    pub(crate) fn contains(&self, a: NodeId, b: NodeId) -> bool {
        let (short, other) = if self.degree(a) <= self.degree(b) {
            (a, b)
        } else {
            (b, a)
        };
        self.neighbors(short).binary_search(&other).is_ok()
    }

    /// Every edge once, as canonical pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = NodePair> + '_ {
        (0..self.node_count() as NodeId).flat_map(move |x| {
            self.neighbors(x)
                .iter()
                .filter(move |&&y| y > x)
                .map(move |&y| NodePair { x, y })
        })
    }

    /// Full scan of the structural invariants. Returns a description of the
    /// first violation found.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.node_count();
        let mut degree_sum = 0usize;
        for x in 0..n as NodeId {
            let nb = self.neighbors(x);
            degree_sum += nb.len();
            for w in nb.windows(2) {
                if w[0] >= w[1] {
                    return Err(format!("neighbors of {x} not strictly increasing"));
                }
            }
            for &y in nb {
                if y == x {
                    return Err(format!("self-loop at {x}"));
                }
                if y as usize >= n {
                    return Err(format!("neighbor {y} of {x} out of range"));
                }
                if self.neighbors(y).binary_search(&x).is_err() {
                    return Err(format!("edge ({x}, {y}) not symmetric"));
                }
            }
        }
        if degree_sum != 2 * self.edge_count() {
            return Err("degree sum differs from 2m".into());
        }
        Ok(())
    }

    /// Component id per node, numbered in order of smallest contained node.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s as NodeId);
            while let Some(v) = queue.pop_front() {
                for &w in self.neighbors(v) {
                    if comp[w as usize] == usize::MAX {
                        comp[w as usize] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() > 0 && self.components().1 == 1
    }

    /// Induced subgraph on `keep` (must be sorted), relabeled densely in the
    /// same order. Labels carry over.
    fn induced(&self, keep: &[NodeId]) -> Self {
        let mut new_id = vec![NodeId::MAX; self.node_count()];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v as usize] = i as NodeId;
        }
        let mut offsets = Vec::with_capacity(keep.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for &v in keep {
            // relabeling is monotone, so sorted order is preserved
            targets.extend(
                self.neighbors(v)
                    .iter()
                    .map(|&w| new_id[w as usize])
                    .filter(|&w| w != NodeId::MAX),
            );
            offsets.push(targets.len());
        }
        let labels = self.labels.as_ref().map(|l| {
            keep.iter()
                .map(|&v| l[v as usize].clone())
                .collect::<Vec<_>>()
        });
        Self {
            offsets,
            targets,
            labels,
        }
    }
}

/// Largest connected component, relabeled densely. Equal-size components are
/// resolved in favour of the one containing the smallest node id.
pub fn giant_component(g: &Graph) -> Result<Graph> {
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let (comp, count) = g.components();
    let mut sizes = vec![0usize; count];
    for &c in &comp {
        sizes[c] += 1;
    }
    // components are numbered by smallest member, so the first maximum wins ties
    let mut best = 0;
    for c in 1..count {
        if sizes[c] > sizes[best] {
            best = c;
        }
    }
    if count == 1 {
        return Ok(g.clone());
    }
    let keep: Vec<NodeId> = (0..g.node_count())
        .filter(|&v| comp[v] == best)
        .map(|v| v as NodeId)
        .collect();
    Ok(g.induced(&keep))
}

/// Reads a whitespace- or comma-separated edge list.
///
/// Lines starting with `#` or `%` and blank lines are skipped. Tokens may be
/// arbitrary strings; they are numbered by first appearance and kept as labels.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut ids: HashMap<String, NodeId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |tok: &str| -> NodeId {
        if let Some(&id) = ids.get(tok) {
            return id;
        }
        let id = labels.len() as NodeId;
        labels.push(tok.to_string());
        ids.insert(tok.to_string(), id);
        id
    };
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: i + 1,
                found: tokens.len(),
            });
        }
        let a = intern(tokens[0]);
        let b = intern(tokens[1]);
        edges.push((a, b));
    }
    let n = labels.len();
    let g = Graph::from_edges(n, edges)?;
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    Ok(g.with_labels(labels))
}

/// Writes one `x y` line per edge using node labels.
pub fn write_edge_list<W: std::io::Write>(g: &Graph, mut out: W) -> Result<()> {
    for p in g.edges() {
        writeln!(out, "{} {}", g.label(p.x), g.label(p.y))?;
    }
    out.flush()?;
    Ok(())
}

/// Barabási–Albert preferential attachment.
///
/// Starts from `m_attach` isolated nodes; every later node links to
/// `m_attach` distinct existing nodes drawn with probability proportional to
/// degree (uniformly while all degrees are zero). The result has exactly
/// `m_attach * (n - m_attach)` edges.
pub fn generate_ba(n: usize, m_attach: usize, seed: u64) -> Result<Graph> {
    if m_attach == 0 {
        return Err(Error::InvalidParameter(
            "m_attach must be at least 1".into(),
        ));
    }
    if n <= m_attach {
        return Err(Error::InvalidParameter(format!(
            "nodes ({n}) must exceed m_attach ({m_attach})"
        )));
    }
    if n > NodeId::MAX as usize {
        return Err(Error::InvalidParameter(format!("{n} nodes is too many")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // each node appears once per incident edge end
    let mut ends: Vec<NodeId> = Vec::with_capacity(2 * m_attach * (n - m_attach));
    let mut edges = Vec::with_capacity(m_attach * (n - m_attach));
    let mut chosen: Vec<NodeId> = Vec::with_capacity(m_attach);
    for v in m_attach..n {
        chosen.clear();
        while chosen.len() < m_attach {
            let t = if ends.is_empty() {
                rng.gen_range(0..v) as NodeId
            } else {
                ends[rng.gen_range(0..ends.len())]
            };
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.push((v as NodeId, t));
            ends.push(t);
            ends.push(v as NodeId);
        }
    }
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Graph> {
        load_edge_list(text.as_bytes())
    }

    #[test]
    fn duplicates_collapse() {
        let g = parse("a b\nb c\na b\n").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (3, 2));
        assert_eq!(g.labels().unwrap(), ["a", "b", "c"]);
    }

    #[test]
    fn self_loop_dropped() {
        let g = parse("1 1\n1 2\n").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
    }

    #[test]
    fn comments_commas_and_blanks() {
        let g = parse("# header\n% other\n\n1,2\n  2\t3\n3 , 1\n").unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (3, 3));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        match parse("1 2\n# c\n1 2 3\n") {
            Err(Error::Parse { line: 3, found: 3 }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse("1\n"),
            Err(Error::Parse { line: 1, found: 1 })
        ));
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(parse(""), Err(Error::NoEdges)));
        assert!(matches!(parse("# only\n"), Err(Error::NoEdges)));
        assert!(matches!(parse("4 4\n"), Err(Error::NoEdges)));
    }

    #[test]
    fn has_edge_cases() {
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(tri.has_edge(NodePair::new(0, 1).unwrap()).unwrap());
        assert!(tri.has_edge(NodePair::new(2, 0).unwrap()).unwrap());
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(!path.has_edge(NodePair::new(0, 2).unwrap()).unwrap());
        assert!(matches!(
            path.has_edge(NodePair::new(0, 7).unwrap()),
            Err(Error::NodeOutOfRange { id: 7, n: 3 })
        ));
    }

    #[test]
    fn node_pair_is_canonical() {
        let p = NodePair::new(5, 2).unwrap();
        assert_eq!((p.x(), p.y()), (2, 5));
        assert!(NodePair::new(3, 3).is_err());
    }

    #[test]
    fn giant_component_prefers_larger() {
        // two disjoint triangles plus an isolated edge
        let g =
            Graph::from_edges(8, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (6, 7)]).unwrap();
        let gc = giant_component(&g).unwrap();
        assert_eq!((gc.node_count(), gc.edge_count()), (3, 3));
    }

    #[test]
    fn giant_component_tie_break_by_smallest_id() {
        let g = parse("x y\ny z\np q\nq r\n").unwrap();
        let gc = giant_component(&g).unwrap();
        assert_eq!(gc.labels().unwrap(), ["x", "y", "z"]);
    }

    #[test]
    fn giant_component_edgeless() {
        let g = Graph::from_edges(3, []).unwrap();
        assert!(matches!(giant_component(&g), Err(Error::NoEdges)));
    }

    #[test]
    fn path_union() {
        let g = Graph::from_edges(5, [(0, 1), (2, 3), (3, 4)]).unwrap();
        let gc = giant_component(&g).unwrap();
        assert_eq!((gc.node_count(), gc.edge_count()), (3, 2));
        assert!(gc.is_connected());
        gc.validate().unwrap();
    }

    #[test]
    fn ba_edge_counts() {
        assert_eq!(generate_ba(100, 10, 1).unwrap().edge_count(), 900);
        assert_eq!(generate_ba(11, 10, 1).unwrap().edge_count(), 10);
        assert!(generate_ba(10, 10, 1).is_err());
        assert!(generate_ba(5, 0, 1).is_err());
    }

    #[test]
    fn ba_is_deterministic() {
        assert_eq!(
            generate_ba(200, 3, 9).unwrap(),
            generate_ba(200, 3, 9).unwrap()
        );
        assert_ne!(
            generate_ba(200, 3, 9).unwrap(),
            generate_ba(200, 3, 10).unwrap()
        );
    }

    #[test]
    fn write_then_load() {
        let g = parse("a b\nb c\nc a\nc d\n").unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let h = load_edge_list(buf.as_slice()).unwrap();
        assert_eq!(g.edge_count(), h.edge_count());
        assert_eq!(g.labels(), h.labels());
    }
}
