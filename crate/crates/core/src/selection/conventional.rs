//! The conventional resampling greedy: a fresh snapshot set per iteration.
//!
//! Because each iteration sees a different sample, the estimated gains are
//! not those of one fixed function and may rise between iterations.

use std::time::{Duration, Instant};

use super::greedy::best_candidate;
use super::{check_args, coverage, SelectionResult};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::rng::{derive_seed, Domain};
use crate::sampling::{sample_snapshot_set, SnapshotSet};
use crate::visit::Visited;

/// Iteration `i` samples `r_per_iter` snapshots under the seed derived from
/// `(rng_seed, i)`.
///
/// `spread_trace` is the running sum of the per-iteration gain estimates.
pub fn conventional_greedy(
    g: &WeightedGraph,
    k: usize,
    r_per_iter: usize,
    rng_seed: u64,
) -> Result<SelectionResult> {
    check_args(k, r_per_iter)?;
    let mut sampling = Duration::ZERO;
    let mut result = run(g, k, |i| {
        let start = Instant::now();
        let ss = sample_snapshot_set(g, r_per_iter, derive_seed(rng_seed, Domain::Conventional, i as u64));
        sampling += start.elapsed();
        ss
    })?;
    result.elapsed.selection = result.elapsed.selection.saturating_sub(sampling);
    result.elapsed.sampling = sampling;
    Ok(result)
}

/// Runs the conventional greedy with `sets[i]` as the sample for iteration
/// `i`; `k` may not exceed `sets.len()`.
pub fn conventional_greedy_over(sets: &[SnapshotSet<'_>], k: usize) -> Result<SelectionResult> {
    let first = sets.first().ok_or_else(|| Error::Argument("no snapshot sets given".into()))?;
    check_args(k, first.len())?;
    if k > sets.len() {
        return Err(Error::Argument(format!("k = {k} but only {} snapshot sets", sets.len())));
    }
    let g = first.parent();
    if sets.iter().any(|s| !std::ptr::eq(s.parent(), g)) {
        return Err(Error::Argument("snapshot sets come from different graphs".into()));
    }
    run(g, k, |i| Ok(sets[i].clone()))
}

fn run<'g, F>(g: &'g WeightedGraph, k: usize, mut sample: F) -> Result<SelectionResult>
where
    F: FnMut(usize) -> Result<SnapshotSet<'g>>,
{
    let start = Instant::now();
    let n = g.node_count();
    let mut result = SelectionResult::default();
    let mut in_seeds = vec![false; n];
    let mut visited = Visited::new(n);
    let mut running = 0.0;

    for i in 0..k.min(n) {
        let ss = sample(i)?;
        let r = ss.len() as f64;
        let base = coverage(&ss, result.seeds.as_slice(), &mut visited);
        let best = best_candidate(&ss, result.seeds.as_slice(), &in_seeds);
        result.evaluations += best.evaluated;
        in_seeds[best.node.index()] = true;
        result.seeds.insert(best.node);
        let gain = (best.coverage - base) as f64 / r;
        running += gain;
        result.marginal_gains.push(gain);
        result.spread_trace.push(running);
    }
    result.elapsed.selection = start.elapsed();
    Ok(result)
}
