use std::time::Instant;

use rayon::prelude::*;

use super::{check_args, coverage, SelectionResult};
use crate::error::Result;
use crate::graph::{NodeId, WeightedGraph};
use crate::sampling::{sample_snapshot_set, SnapshotSet};
use crate::visit::Visited;

/// StaticGreedy: sample `r` snapshots once, then pick `k` seeds greedily
/// against that same snapshot set.
///
/// Stops early after `n` picks when `k > n`.
pub fn static_greedy(g: &WeightedGraph, k: usize, r: usize, rng_seed: u64) -> Result<SelectionResult> {
    check_args(k, r)?;
    let start = Instant::now();
    let ss = sample_snapshot_set(g, r, rng_seed)?;
    let sampling = start.elapsed();
    let mut result = static_greedy_over(&ss, k)?;
    result.elapsed.sampling = sampling;
    Ok(result)
}

/// Greedy selection on a given snapshot set. Every candidate is re-scored
/// from scratch in every iteration by traversing `S ∪ {v}` in each snapshot.
pub fn static_greedy_over(ss: &SnapshotSet<'_>, k: usize) -> Result<SelectionResult> {
    check_args(k, ss.len())?;
    let start = Instant::now();
    let n = ss.parent().node_count();
    let r = ss.len() as f64;
    let mut result = SelectionResult::default();
    let mut in_seeds = vec![false; n];
    let mut covered = 0u64;

    for _ in 0..k.min(n) {
        let best = best_candidate(ss, result.seeds.as_slice(), &in_seeds);
        result.evaluations += best.evaluated;
        let (v, total) = (best.node, best.coverage);
        in_seeds[v.index()] = true;
        result.seeds.insert(v);
        result.marginal_gains.push((total - covered) as f64 / r);
        result.spread_trace.push(total as f64 / r);
        covered = total;
    }
    result.elapsed.selection = start.elapsed();
    Ok(result)
}

pub(crate) struct Candidate {
    pub node: NodeId,
    /// `Σ_j |R(G'_j, S ∪ {node})|`.
    pub coverage: u64,
    pub evaluated: u64,
}

/// Scores every node outside `seeds` on `ss` and returns the one with the
/// largest coverage, lowest id first among equals.
pub(crate) fn best_candidate(ss: &SnapshotSet<'_>, seeds: &[NodeId], in_seeds: &[bool]) -> Candidate {
    let n = ss.parent().node_count();
    let candidates: Vec<u32> = (0..n as u32).filter(|&v| !in_seeds[v as usize]).collect();
    let scores: Vec<u64> = candidates
        .par_iter()
        .map_init(
            || (Visited::new(n), seeds.to_vec()),
            |(visited, with), &v| {
                with.truncate(seeds.len());
                with.push(NodeId(v));
                coverage(ss, with, visited)
            },
        )
        .collect();
    let (best, &coverage) = scores
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.cmp(b).then(j.cmp(i)))
        .expect("at least one candidate outside the seed set");
    Candidate { node: NodeId(candidates[best]), coverage, evaluated: candidates.len() as u64 }
}
