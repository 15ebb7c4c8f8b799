//! Directed graphs with per-edge activation probabilities.
//!
//! Nodes carry dense ids in `[0, n)`; the external labels seen at ingestion
//! are kept for output. Dense ids are assigned in ascending label order, so
//! writing a graph back out and re-reading it reproduces the same ids.
//!
//! Edges are stored in compressed sparse row order (by source id, then by
//! first appearance). The position of an edge in that order is its edge
//! index, which is what snapshot masks are keyed by.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};

use rand::Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rng::{self, Domain};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Directed graph `G = (V, E)` with a probability `p(u, v)` on every edge.
///
/// Immutable once built. An edge whose probability has not been assigned yet
/// holds NaN internally and reports `None` from [`WeightedGraph::probability`].
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    offsets: Vec<u32>,
    targets: Vec<u32>,
    probs: Vec<f64>,
    labels: Vec<u64>,
    label_index: HashMap<u64, NodeId>,
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
            && self.offsets == other.offsets
            && self.targets == other.targets
            && self.probs.len() == other.probs.len()
            && self.probs.iter().zip(&other.probs).all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

/// A borrowed view of one edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub index: usize,
    pub source: NodeId,
    pub target: NodeId,
    pub probability: Option<f64>,
}

impl WeightedGraph {
    /// Builds a graph over nodes `0..n` whose labels equal their ids.
    ///
    /// Self-loops are dropped and duplicate directed edges keep their first
    /// occurrence. Endpoints must be `< n` and probabilities in `[0, 1]`.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32, Option<f64>)>,
    {
        let labels = (0..n as u64).collect();
        let mut checked = Vec::new();
        for (i, (u, v, p)) in edges.into_iter().enumerate() {
            if u as usize >= n || v as usize >= n {
                return Err(Error::Argument(format!("edge {i} ({u}, {v}) has an endpoint >= {n}")));
            }
            if let Some(p) = p {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::Domain { line: i + 1, value: p });
                }
            }
            checked.push((u, v, p));
        }
        Ok(Self::build(labels, checked).0)
    }

    /// Assembles the CSR arrays. Returns the graph plus the number of
    /// duplicate edges and self-loops that were dropped.
    fn build(labels: Vec<u64>, edges: Vec<(u32, u32, Option<f64>)>) -> (Self, usize, usize) {
        let n = labels.len();
        let mut seen = HashSet::with_capacity(edges.len());
        let mut kept = Vec::with_capacity(edges.len());
        let (mut duplicates, mut self_loops) = (0, 0);
        for (u, v, p) in edges {
            if u == v {
                self_loops += 1;
            } else if !seen.insert((u, v)) {
                duplicates += 1;
            } else {
                kept.push((u, v, p.unwrap_or(f64::NAN)));
            }
        }

        let mut offsets = vec![0u32; n + 1];
        for &(u, _, _) in &kept {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor: Vec<u32> = offsets[..n].to_vec();
        let mut targets = vec![0u32; kept.len()];
        let mut probs = vec![0f64; kept.len()];
        for (u, v, p) in kept {
            let slot = cursor[u as usize] as usize;
            targets[slot] = v;
            probs[slot] = p;
            cursor[u as usize] += 1;
        }

        let label_index = labels.iter().enumerate().map(|(i, &l)| (l, NodeId(i as u32))).collect();
        let graph = WeightedGraph { offsets, targets, probs, labels, label_index };
        (graph, duplicates, self_loops)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_count() as u32).map(NodeId)
    }

    /// Edge indices leaving `u`.
    #[inline]
    pub fn out_edge_range(&self, u: NodeId) -> std::ops::Range<usize> {
        self.offsets[u.index()] as usize..self.offsets[u.index() + 1] as usize
    }

    #[inline]
    pub fn out_degree(&self, u: NodeId) -> usize {
        self.out_edge_range(u).len()
    }

    pub fn out_neighbors(&self, u: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.targets[self.out_edge_range(u)].iter().map(|&v| NodeId(v))
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count()];
        for &v in &self.targets {
            deg[v as usize] += 1;
        }
        deg
    }

    #[inline]
    pub fn target(&self, edge: usize) -> NodeId {
        NodeId(self.targets[edge])
    }

    #[inline]
    pub fn probability(&self, edge: usize) -> Option<f64> {
        let p = self.probs[edge];
        (!p.is_nan()).then_some(p)
    }

    /// True once every edge carries a probability.
    pub fn probabilities_assigned(&self) -> bool {
        self.probs.iter().all(|p| !p.is_nan())
    }

    pub(crate) fn offsets(&self) -> &[u32] {
        &self.offsets
    }

    pub(crate) fn targets(&self) -> &[u32] {
        &self.targets
    }

    pub(crate) fn raw_probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// All edges in edge-index order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.nodes().flat_map(move |u| {
            self.out_edge_range(u).map(move |e| Edge {
                index: e,
                source: u,
                target: self.target(e),
                probability: self.probability(e),
            })
        })
    }

    pub fn label(&self, node: NodeId) -> u64 {
        self.labels[node.index()]
    }

    pub fn node_of(&self, label: u64) -> Option<NodeId> {
        self.label_index.get(&label).copied()
    }

    /// Returns a copy with every edge probability replaced.
    pub fn with_probabilities(&self, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != self.edge_count() {
            return Err(Error::Argument(format!(
                "{} probabilities for {} edges",
                probs.len(),
                self.edge_count()
            )));
        }
        if let Some((i, &p)) = probs.iter().enumerate().find(|(_, p)| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Domain { line: i + 1, value: p });
        }
        Ok(WeightedGraph { probs, ..self.clone() })
    }

    /// SHA-256 over node labels, edge structure and probability bits.
    pub fn content_hash(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update((self.node_count() as u64).to_le_bytes());
        h.update((self.edge_count() as u64).to_le_bytes());
        for l in &self.labels {
            h.update(l.to_le_bytes());
        }
        for o in &self.offsets {
            h.update(o.to_le_bytes());
        }
        for t in &self.targets {
            h.update(t.to_le_bytes());
        }
        for p in &self.probs {
            h.update(p.to_bits().to_le_bytes());
        }
        h.finalize().into()
    }
}

/// How edge probabilities are assigned.
#[derive(Clone, Debug, PartialEq)]
pub enum ProbabilityModel {
    Uniform(f64),
    /// `p(u, v) = 1 / in-degree(v)`.
    WeightedCascade,
    /// Each edge draws one value uniformly from the multiset.
    Trivalency(Vec<f64>),
}

impl ProbabilityModel {
    pub fn trivalency() -> Self {
        ProbabilityModel::Trivalency(vec![0.1, 0.01, 0.001])
    }
}

/// Output of [`parse_edge_list`].
#[derive(Clone, Debug)]
pub struct ParsedEdgeList {
    pub graph: WeightedGraph,
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

/// Reads the `u v [p]` edge-list format.
///
/// Lines whose first non-blank character is `#` are comments and blank lines
/// are ignored. Edges without an explicit probability get `default_p`, or stay
/// unassigned when it is `None`.
pub fn parse_edge_list<R: BufRead>(input: R, default_p: Option<f64>) -> Result<ParsedEdgeList> {
    if let Some(p) = default_p {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Argument(format!("default probability {p} outside [0, 1]")));
        }
    }

    let mut raw = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 2 or 3 fields, found {}", fields.len()),
            });
        }
        let label = |tok: &str| {
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("'{tok}' is not a non-negative integer node label"),
            })
        };
        let (u, v) = (label(fields[0])?, label(fields[1])?);
        let p = match fields.get(2) {
            Some(tok) => {
                let p = tok.parse::<f64>().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("'{tok}' is not a number"),
                })?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::Domain { line: lineno, value: p });
                }
                Some(p)
            }
            None => default_p,
        };
        raw.push((u, v, p));
    }

    let mut labels: Vec<u64> = raw.iter().flat_map(|&(u, v, _)| [u, v]).collect();
    labels.sort_unstable();
    labels.dedup();
    let dense = |l: u64| labels.binary_search(&l).expect("label collected above") as u32;
    let edges = raw.iter().map(|&(u, v, p)| (dense(u), dense(v), p)).collect();

    let (graph, duplicate_edges, self_loops) = WeightedGraph::build(labels.clone(), edges);
    Ok(ParsedEdgeList { graph, duplicate_edges, self_loops })
}

/// Writes `g` in the edge-list format read by [`parse_edge_list`].
///
/// Probabilities use the shortest representation that parses back to the
/// same `f64`. A node without incident edges is written as a self-loop line,
/// which the parser drops while still registering the node.
pub fn write_edge_list<W: Write>(g: &WeightedGraph, mut out: W) -> Result<()> {
    writeln!(out, "# nodes {} edges {}", g.node_count(), g.edge_count())?;
    let mut touched = vec![false; g.node_count()];
    for e in g.edges() {
        touched[e.source.index()] = true;
        touched[e.target.index()] = true;
        let (u, v) = (g.label(e.source), g.label(e.target));
        match e.probability {
            Some(p) => writeln!(out, "{u} {v} {p:?}")?,
            None => writeln!(out, "{u} {v}")?,
        }
    }
    for (i, _) in touched.iter().enumerate().filter(|(_, t)| !**t) {
        let l = g.label(NodeId(i as u32));
        writeln!(out, "{l} {l}")?;
    }
    Ok(())
}

/// Returns a copy of `g` with probabilities set by `model`.
///
/// Uniform and weighted cascade are deterministic; trivalency draws from the
/// stream keyed by `rng_seed`, so the same seed reproduces the assignment.
pub fn assign_probabilities(
    g: &WeightedGraph,
    model: &ProbabilityModel,
    rng_seed: u64,
) -> Result<WeightedGraph> {
    let probs = match model {
        ProbabilityModel::Uniform(p) => vec![*p; g.edge_count()],
        ProbabilityModel::WeightedCascade => {
            let indeg = g.in_degrees();
            g.targets().iter().map(|&v| 1.0 / indeg[v as usize] as f64).collect()
        }
        ProbabilityModel::Trivalency(values) => {
            if values.is_empty() {
                return Err(Error::Argument("trivalency needs at least one value".into()));
            }
            let mut rng = rng::stream(rng_seed, Domain::Trivalency, 0);
            (0..g.edge_count()).map(|_| values[rng.gen_range(0..values.len())]).collect()
        }
    };
    g.with_probabilities(probs)
}
