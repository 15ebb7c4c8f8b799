//! Randomized audit of monotonicity and submodularity of the snapshot
//! spread estimate.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use super::coverage;
use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::rng::{self, Domain};
use crate::sampling::SnapshotSet;
use crate::spread::SeedSet;
use crate::visit::Visited;

/// `gain_s < gain_t` although `s ⊆ t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub s: SeedSet,
    pub t: SeedSet,
    pub v: NodeId,
    pub gain_s: f64,
    pub gain_t: f64,
}

/// Adding `v` to `base` lowered the estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityViolation {
    pub base: SeedSet,
    pub v: NodeId,
    pub gain: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SubmodularityReport {
    pub trials: usize,
    pub violations: Vec<Violation>,
    pub monotonicity_violations: Vec<MonotonicityViolation>,
    /// Smallest and largest marginal gain seen over all trials.
    pub gain_range: Option<(f64, f64)>,
}

impl SubmodularityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.monotonicity_violations.is_empty()
    }
}

/// Samples `trials` triples `S ⊆ T`, `v ∉ T` and checks
/// `f(S ∪ {v}) - f(S) ≥ f(T ∪ {v}) - f(T) ≥ 0` for `f = snapshot_spread(ss, ·)`.
///
/// For a fixed snapshot set `f` is a coverage function, so the report is
/// always clean.
pub fn check_submodularity(ss: &SnapshotSet<'_>, trials: usize, rng_seed: u64) -> Result<SubmodularityReport> {
    check_submodularity_across(ss, ss, trials, rng_seed)
}

/// As [`check_submodularity`], but the `S`-side gain is estimated on
/// `s_side` and the `T`-side gain on `t_side`, the way a resampling greedy
/// compares gains from different iterations.
pub fn check_submodularity_across(
    s_side: &SnapshotSet<'_>,
    t_side: &SnapshotSet<'_>,
    trials: usize,
    rng_seed: u64,
) -> Result<SubmodularityReport> {
    if trials < 1 {
        return Err(Error::Argument("trials must be at least 1".into()));
    }
    let n = s_side.parent().node_count();
    if t_side.parent().node_count() != n {
        return Err(Error::Argument("snapshot sets cover different node counts".into()));
    }
    let mut report = SubmodularityReport { trials, ..Default::default() };
    if n == 0 {
        return Ok(report);
    }
    let (rs, rt) = (s_side.len() as i64, t_side.len() as i64);

    let outcomes: Vec<_> = (0..trials as u64)
        .into_par_iter()
        .map_init(
            || Visited::new(n),
            |visited, trial| {
                let mut rng = rng::stream(rng_seed, Domain::Audit, trial);
                let mut order: Vec<NodeId> = (0..n as u32).map(NodeId).collect();
                order.shuffle(&mut rng);
                let v = order[0];
                let t_len = rng.gen_range(0..n);
                let s_len = if t_len == 0 { 0 } else { rng.gen_range(0..t_len) };
                let t = &order[1..1 + t_len];
                let s = &t[..s_len];

                let mut gain = |ss: &SnapshotSet<'_>, base: &[NodeId]| {
                    let mut with = base.to_vec();
                    with.push(v);
                    coverage(ss, &with, visited) as i64 - coverage(ss, base, visited) as i64
                };
                let gs = gain(s_side, s);
                let gt = gain(t_side, t);
                (s.to_vec(), t.to_vec(), v, gs, gt)
            },
        )
        .collect();

    for (s, t, v, gs, gt) in outcomes {
        let (fs, ft) = (gs as f64 / rs as f64, gt as f64 / rt as f64);
        let (lo, hi) = report.gain_range.unwrap_or((f64::INFINITY, f64::NEG_INFINITY));
        report.gain_range = Some((lo.min(fs).min(ft), hi.max(fs).max(ft)));
        // gs / rs < gt / rt, compared exactly
        if gs * rt < gt * rs {
            report.violations.push(Violation {
                s: SeedSet::from_nodes(s.iter().copied()),
                t: SeedSet::from_nodes(t.iter().copied()),
                v,
                gain_s: fs,
                gain_t: ft,
            });
        }
        for (base, g, f) in [(&s, gs, fs), (&t, gt, ft)] {
            if g < 0 {
                report.monotonicity_violations.push(MonotonicityViolation {
                    base: SeedSet::from_nodes(base.iter().copied()),
                    v,
                    gain: f,
                });
            }
        }
    }
    Ok(report)
}
