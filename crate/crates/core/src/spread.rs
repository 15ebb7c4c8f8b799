//! Influence spread `I(S)`: the expected number of nodes eventually active
//! when the seed set `S` starts active.
//!
//! Three routes are provided. [`snapshot_spread`] averages reachability over a
//! snapshot set, [`simulate_spread`] runs the layered diffusion process, and
//! [`exact_spread`] enumerates every edge realization of a small graph.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedGraph};
use crate::rng::{self, Domain};
use crate::sampling::{Snapshot, SnapshotSet};
use crate::visit::Visited;

/// Largest edge count [`exact_spread`] will enumerate.
pub const EXACT_EDGE_LIMIT: usize = 24;

/// Seed nodes in insertion order, without duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SeedSet {
    members: Vec<NodeId>,
}

impl SeedSet {
    pub fn new() -> Self {
        SeedSet::default()
    }

    /// Collects `nodes`, silently skipping repeats.
    pub fn from_nodes<I: IntoIterator<Item = NodeId>>(nodes: I) -> Self {
        let mut s = SeedSet::new();
        for v in nodes {
            s.insert(v);
        }
        s
    }

    /// Adds `v`; returns false if it was already present.
    pub fn insert(&mut self, v: NodeId) -> bool {
        if self.contains(v) {
            false
        } else {
            self.members.push(v);
            true
        }
    }

    /// A copy with `v` added.
    pub fn with(&self, v: NodeId) -> SeedSet {
        let mut s = self.clone();
        s.insert(v);
        s
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.members.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.members.iter().copied()
    }

    /// Errors unless every member is a node of a graph with `node_count` nodes.
    pub fn check(&self, node_count: usize) -> Result<()> {
        match self.members.iter().find(|v| v.index() >= node_count) {
            Some(v) => Err(Error::Argument(format!("seed {v} outside graph of {node_count} nodes"))),
            None => Ok(()),
        }
    }
}

impl FromIterator<NodeId> for SeedSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        SeedSet::from_nodes(iter)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Estimator {
    Snapshot,
    Simulation,
    Exact,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpreadEstimate {
    pub value: f64,
    pub estimator: Estimator,
    /// `R` for snapshots, rounds for simulation, 0 for exact.
    pub samples: usize,
    pub rng_seed: Option<u64>,
    /// Standard error of the mean over samples; 0 for exact.
    pub std_error: f64,
}

/// Counts nodes reachable from `seeds` over retained edges, continuing from
/// whatever `visited` already holds. Seeds count themselves.
pub(crate) fn reach<I>(snap: &Snapshot<'_>, seeds: I, visited: &mut Visited) -> usize
where
    I: IntoIterator<Item = NodeId>,
{
    let mut queue = std::mem::take(&mut visited.queue);
    queue.clear();
    for s in seeds {
        if visited.mark(s.0) {
            queue.push(s.0);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        snap.for_each_neighbor(u, |v| {
            if visited.mark(v) {
                queue.push(v);
            }
        });
    }
    let count = queue.len();
    visited.queue = queue;
    count
}

/// `|R(G', S)|`: the number of nodes reachable from `seeds` in `snap`.
pub fn reachable_count(snap: &Snapshot<'_>, seeds: &SeedSet) -> usize {
    if seeds.is_empty() {
        return 0;
    }
    let mut visited = Visited::new(snap.node_count());
    visited.reset();
    reach(snap, seeds.iter(), &mut visited)
}

fn mean_and_error(sum: f64, sum_sq: f64, samples: usize) -> (f64, f64) {
    let r = samples as f64;
    let mean = sum / r;
    if samples < 2 {
        return (mean, 0.0);
    }
    let var = ((sum_sq - sum * sum / r) / (r - 1.0)).max(0.0);
    (mean, (var / r).sqrt())
}

/// Mean of `reachable_count` over every snapshot in `ss`.
pub fn snapshot_spread(ss: &SnapshotSet<'_>, seeds: &SeedSet) -> SpreadEstimate {
    let (sum, sum_sq) = if seeds.is_empty() {
        (0u64, 0u64)
    } else {
        ss.snapshots()
            .par_iter()
            .map_init(
                || Visited::new(ss.parent().node_count()),
                |visited, snap| {
                    visited.reset();
                    let c = reach(snap, seeds.iter(), visited) as u64;
                    (c, c * c)
                },
            )
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    };
    let (value, std_error) = mean_and_error(sum as f64, sum_sq as f64, ss.len());
    SpreadEstimate {
        value,
        estimator: Estimator::Snapshot,
        samples: ss.len(),
        rng_seed: Some(ss.rng_seed()),
        std_error,
    }
}

/// Mean final active count over `rounds` runs of the cascade, round `i`
/// drawing from stream `(rng_seed, i)`.
///
/// Each newly active node gets one chance per inactive out-neighbour, so
/// every edge's coin is flipped at most once per round.
pub fn simulate_spread(
    g: &WeightedGraph,
    seeds: &SeedSet,
    rounds: usize,
    rng_seed: u64,
) -> Result<SpreadEstimate> {
    if rounds < 1 {
        return Err(Error::Argument("simulation rounds must be at least 1".into()));
    }
    if !g.probabilities_assigned() {
        return Err(Error::Config("edge probabilities are not assigned".into()));
    }
    seeds.check(g.node_count())?;

    let (offsets, targets, probs) = (g.offsets(), g.targets(), g.raw_probabilities());
    let (sum, sum_sq) = if seeds.is_empty() {
        (0u64, 0u64)
    } else {
        (0..rounds as u64)
            .into_par_iter()
            .map_init(
                || (Visited::new(g.node_count()), Vec::new()),
                |(active, next), round| {
                    let mut rng = rng::stream(rng_seed, Domain::Simulation, round);
                    active.reset();
                    let mut frontier = std::mem::take(&mut active.queue);
                    frontier.clear();
                    frontier.extend(seeds.iter().map(|s| s.0));
                    seeds.iter().for_each(|s| {
                        active.mark(s.0);
                    });
                    let mut total = frontier.len() as u64;
                    while !frontier.is_empty() {
                        next.clear();
                        for &u in &frontier {
                            for e in offsets[u as usize] as usize..offsets[u as usize + 1] as usize {
                                let v = targets[e];
                                if !active.is_marked(v) && rng.gen::<f64>() < probs[e] {
                                    active.mark(v);
                                    next.push(v);
                                }
                            }
                        }
                        total += next.len() as u64;
                        std::mem::swap(&mut frontier, next);
                    }
                    active.queue = frontier;
                    (total, total * total)
                },
            )
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    };
    let (value, std_error) = mean_and_error(sum as f64, sum_sq as f64, rounds);
    Ok(SpreadEstimate {
        value,
        estimator: Estimator::Simulation,
        samples: rounds,
        rng_seed: Some(rng_seed),
        std_error,
    })
}

/// `I(S)` by enumerating all `2^|E|` edge realizations.
///
/// Edges with probability exactly 0 or 1 are fixed rather than enumerated,
/// which changes the work but not the sum.
pub fn exact_spread(g: &WeightedGraph, seeds: &SeedSet) -> Result<SpreadEstimate> {
    if g.edge_count() > EXACT_EDGE_LIMIT {
        return Err(Error::Capacity { edges: g.edge_count(), limit: EXACT_EDGE_LIMIT });
    }
    if !g.probabilities_assigned() {
        return Err(Error::Config("edge probabilities are not assigned".into()));
    }
    seeds.check(g.node_count())?;
    let exact = |value| SpreadEstimate {
        value,
        estimator: Estimator::Exact,
        samples: 0,
        rng_seed: None,
        std_error: 0.0,
    };
    if seeds.is_empty() {
        return Ok(exact(0.0));
    }

    let n = g.node_count();
    let edges: Vec<(usize, usize, f64)> =
        g.edges().map(|e| (e.source.index(), e.target.index(), e.probability.unwrap())).collect();
    let uncertain: Vec<usize> = (0..edges.len()).filter(|&e| edges[e].2 > 0.0 && edges[e].2 < 1.0).collect();
    let mut present = vec![false; edges.len()];
    for (e, &(_, _, p)) in edges.iter().enumerate() {
        present[e] = p >= 1.0;
    }

    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, _, _)) in edges.iter().enumerate() {
        adjacency[u].push(e);
    }
    let mut visited = vec![false; n];
    let mut queue = Vec::with_capacity(n);
    let mut total = 0.0;
    for realization in 0u64..1 << uncertain.len() {
        let mut weight = 1.0;
        for (bit, &e) in uncertain.iter().enumerate() {
            let on = realization >> bit & 1 == 1;
            present[e] = on;
            weight *= if on { edges[e].2 } else { 1.0 - edges[e].2 };
        }

        visited.iter_mut().for_each(|v| *v = false);
        queue.clear();
        for s in seeds.iter() {
            if !visited[s.index()] {
                visited[s.index()] = true;
                queue.push(s.index());
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for &e in &adjacency[u] {
                let v = edges[e].1;
                if present[e] && !visited[v] {
                    visited[v] = true;
                    queue.push(v);
                }
            }
        }
        total += weight * queue.len() as f64;
    }
    Ok(exact(total))
}
