//! Seed selection.
//!
//! All greedy variants score a candidate `v` by its marginal gain
//! `Σ_j |R(G'_j, S ∪ {v})| - Σ_j |R(G'_j, S)|` as an integer count over the
//! snapshots and divide by `R` only for reporting, so equal gains compare
//! equal exactly. Ties go to the lowest node id.

use std::time::Duration;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::sampling::SnapshotSet;
use crate::spread::{reach, snapshot_spread, SeedSet};
use crate::visit::Visited;

mod audit;
mod baseline;
mod conventional;
mod dynamic;
mod greedy;

pub use audit::{
    check_submodularity, check_submodularity_across, MonotonicityViolation, SubmodularityReport,
    Violation,
};
pub use baseline::{degree_seeds, random_seeds};
pub use conventional::{conventional_greedy, conventional_greedy_over};
pub use dynamic::{static_greedy_du, static_greedy_du_over};
pub use greedy::{static_greedy, static_greedy_over};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PhaseTimes {
    pub sampling: Duration,
    pub selection: Duration,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SelectionResult {
    pub seeds: SeedSet,
    /// Gain of each chosen node when it was chosen, in selection order.
    pub marginal_gains: Vec<f64>,
    /// Estimated spread of each selection prefix.
    pub spread_trace: Vec<f64>,
    /// Number of per-candidate marginal-gain computations.
    pub evaluations: u64,
    pub elapsed: PhaseTimes,
}

impl SelectionResult {
    /// Scores every prefix of `seeds` on `ss`, replacing `spread_trace` and
    /// setting `marginal_gains` to the successive differences.
    pub fn fill_spread_trace(&mut self, ss: &SnapshotSet<'_>) {
        let mut prefix = SeedSet::new();
        self.spread_trace.clear();
        self.marginal_gains.clear();
        let mut previous = 0.0;
        for v in self.seeds.iter() {
            prefix.insert(v);
            let value = snapshot_spread(ss, &prefix).value;
            self.marginal_gains.push(value - previous);
            self.spread_trace.push(value);
            previous = value;
        }
    }
}

pub(crate) fn check_args(k: usize, r: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    if r < 1 {
        return Err(Error::Argument("snapshot count R must be at least 1".into()));
    }
    Ok(())
}

/// `Σ_j |R(G'_j, S)|` over the snapshots of `ss`.
pub(crate) fn coverage(ss: &SnapshotSet<'_>, seeds: &[NodeId], visited: &mut Visited) -> u64 {
    if seeds.is_empty() {
        return 0;
    }
    ss.iter()
        .map(|snap| {
            visited.reset();
            reach(snap, seeds.iter().copied(), visited) as u64
        })
        .sum()
}

/// `I(S ∪ {v}) - I(S)` as estimated on `ss`.
pub fn marginal_gain(ss: &SnapshotSet<'_>, seeds: &SeedSet, v: NodeId) -> f64 {
    let mut visited = Visited::new(ss.parent().node_count());
    let base = coverage(ss, seeds.as_slice(), &mut visited);
    let with = coverage(ss, seeds.with(v).as_slice(), &mut visited);
    (with as f64 - base as f64) / ss.len() as f64
}
