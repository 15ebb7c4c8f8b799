//! StaticGreedy with dynamic updates.
//!
//! Per snapshot `j` we keep `C_j`, the nodes already reachable from the
//! current seeds. A candidate's gain is `Σ_j |R_j(v) \ C_j|`, found by a
//! traversal that never enters a covered node: `C_j` is closed under
//! reachability, so anything behind a covered node is covered too.
//!
//! On top of that, candidates sit in a max-heap keyed by their last computed
//! gain. Gains only shrink as seeds are added, so a stale key is an upper
//! bound and only the top of the heap needs re-scoring. The result is the
//! same seed sequence and gains as [`super::static_greedy`].

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::Instant;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use super::{check_args, SelectionResult};
use crate::error::Result;
use crate::graph::{NodeId, WeightedGraph};
use crate::sampling::{sample_snapshot_set, Snapshot, SnapshotSet};
use crate::visit::Visited;

pub fn static_greedy_du(g: &WeightedGraph, k: usize, r: usize, rng_seed: u64) -> Result<SelectionResult> {
    check_args(k, r)?;
    let start = Instant::now();
    let ss = sample_snapshot_set(g, r, rng_seed)?;
    let sampling = start.elapsed();
    let mut result = static_greedy_du_over(&ss, k)?;
    result.elapsed.sampling = sampling;
    Ok(result)
}

/// Nodes reachable from `v` in `snap` that are not in `covered`.
fn uncovered_reach(snap: &Snapshot<'_>, covered: &FixedBitSet, v: u32, visited: &mut Visited) -> u64 {
    if covered.contains(v as usize) {
        return 0;
    }
    visited.reset();
    let mut queue = std::mem::take(&mut visited.queue);
    visited.mark(v);
    queue.push(v);
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        snap.for_each_neighbor(u, |w| {
            if !covered.contains(w as usize) && visited.mark(w) {
                queue.push(w);
            }
        });
    }
    let count = queue.len() as u64;
    visited.queue = queue;
    count
}

fn gain(ss: &SnapshotSet<'_>, covered: &[FixedBitSet], v: u32, visited: &mut Visited) -> u64 {
    ss.iter().zip(covered).map(|(snap, c)| uncovered_reach(snap, c, v, visited)).sum()
}

/// Adds everything reachable from `v` to `covered`.
fn cover_from(snap: &Snapshot<'_>, covered: &mut FixedBitSet, v: u32, queue: &mut Vec<u32>) -> u64 {
    if covered.put(v as usize) {
        return 0;
    }
    queue.clear();
    queue.push(v);
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        snap.for_each_neighbor(u, |w| {
            if !covered.put(w as usize) {
                queue.push(w);
            }
        });
    }
    queue.len() as u64
}

pub fn static_greedy_du_over(ss: &SnapshotSet<'_>, k: usize) -> Result<SelectionResult> {
    check_args(k, ss.len())?;
    let start = Instant::now();
    let n = ss.parent().node_count();
    let r = ss.len() as f64;
    let mut result = SelectionResult::default();
    let mut covered: Vec<FixedBitSet> = (0..ss.len()).map(|_| FixedBitSet::with_capacity(n)).collect();

    let initial: Vec<u64> = (0..n as u32)
        .into_par_iter()
        .map_init(|| Visited::new(n), |visited, v| gain(ss, &covered, v, visited))
        .collect();
    result.evaluations = n as u64;

    // (gain, lowest id first, iteration the gain was computed in)
    let mut heap: BinaryHeap<(u64, Reverse<u32>, usize)> =
        initial.into_iter().enumerate().map(|(v, g)| (g, Reverse(v as u32), 0)).collect();
    let mut visited = Visited::new(n);
    let mut queue = Vec::new();
    let mut total = 0u64;

    for round in 0..k.min(n) {
        let chosen = loop {
            let (g, Reverse(v), computed) = heap.pop().expect("heap holds every unselected node");
            if computed == round {
                break (v, g);
            }
            result.evaluations += 1;
            heap.push((gain(ss, &covered, v, &mut visited), Reverse(v), round));
        };
        let (v, g) = chosen;
        let added: u64 = ss.iter().zip(covered.iter_mut()).map(|(snap, c)| cover_from(snap, c, v, &mut queue)).sum();
        debug_assert_eq!(added, g);
        total += g;
        result.seeds.insert(NodeId(v));
        result.marginal_gains.push(g as f64 / r);
        result.spread_trace.push(total as f64 / r);
    }
    result.elapsed.selection = start.elapsed();
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{erdos_renyi, preferential_attachment};
    use crate::graph::{assign_probabilities, ProbabilityModel};
    use crate::selection::static_greedy_over;
    use crate::Error;

    #[test]
    fn matches_plain_on_fixed_examples() {
        let chain = WeightedGraph::from_edges(3, [(0, 1, Some(1.0)), (1, 2, Some(1.0))]).unwrap();
        let star = WeightedGraph::from_edges(6, (1..6).map(|l| (0, l, Some(1.0)))).unwrap();
        for (g, k) in [(&chain, 1), (&chain, 3), (&star, 2), (&star, 10)] {
            let ss = sample_snapshot_set(g, 4, 1).unwrap();
            let plain = static_greedy_over(&ss, k).unwrap();
            let du = static_greedy_du_over(&ss, k).unwrap();
            assert_eq!(plain.seeds, du.seeds);
            assert_eq!(plain.marginal_gains, du.marginal_gains);
            assert_eq!(plain.spread_trace, du.spread_trace);
        }
    }

    #[test]
    fn matches_plain_on_random_graphs_with_ties() {
        for seed in 0..10 {
            let g = if seed % 2 == 0 { erdos_renyi(80, 2.0, seed) } else { preferential_attachment(80, 4.0, seed) }.unwrap();
            let g = assign_probabilities(&g, &ProbabilityModel::Uniform(0.2), 0).unwrap();
            let ss = sample_snapshot_set(&g, 8, seed).unwrap();
            let plain = static_greedy_over(&ss, 15).unwrap();
            let du = static_greedy_du_over(&ss, 15).unwrap();
            assert_eq!(plain.seeds, du.seeds, "seed {seed}");
            assert_eq!(plain.marginal_gains, du.marginal_gains);
            assert!(du.evaluations < plain.evaluations);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let g = WeightedGraph::from_edges(2, [(0, 1, Some(0.5))]).unwrap();
        assert!(matches!(static_greedy_du(&g, 0, 3, 0), Err(Error::Argument(_))));
        assert!(matches!(static_greedy_du(&g, 1, 0, 0), Err(Error::Argument(_))));
    }
}
