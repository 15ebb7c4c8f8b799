use std::time::Instant;

use rand::seq::SliceRandom;

use super::SelectionResult;
use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedGraph};
use crate::rng::{self, Domain};
use crate::spread::SeedSet;

fn check_k(k: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    Ok(())
}

/// The `k` nodes of largest out-degree, lowest id first among equals.
/// Gains and trace are left empty; see [`SelectionResult::fill_spread_trace`].
pub fn degree_seeds(g: &WeightedGraph, k: usize) -> Result<SelectionResult> {
    check_k(k)?;
    let start = Instant::now();
    let mut order: Vec<NodeId> = g.nodes().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.out_degree(v)), v));
    order.truncate(k);
    let mut result = SelectionResult { seeds: SeedSet::from_nodes(order), ..Default::default() };
    result.elapsed.selection = start.elapsed();
    Ok(result)
}

/// `min(k, n)` distinct nodes drawn uniformly from stream `(rng_seed, 0)`.
pub fn random_seeds(g: &WeightedGraph, k: usize, rng_seed: u64) -> Result<SelectionResult> {
    check_k(k)?;
    let start = Instant::now();
    let mut nodes: Vec<NodeId> = g.nodes().collect();
    let take = k.min(nodes.len());
    let mut rng = rng::stream(rng_seed, Domain::RandomSeeds, 0);
    let (picked, _) = nodes.partial_shuffle(&mut rng, take);
    let mut result = SelectionResult { seeds: SeedSet::from_nodes(picked.iter().copied()), ..Default::default() };
    result.elapsed.selection = start.elapsed();
    Ok(result)
}
