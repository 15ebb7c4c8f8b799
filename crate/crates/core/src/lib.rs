//! Influence maximization under the independent cascade (IC) model.
//!
//! The central algorithm is static greedy selection: a fixed set of `R`
//! Monte Carlo snapshots is sampled once and reused by every greedy
//! iteration, so the estimated spread is a fixed coverage function and
//! therefore exactly monotone and submodular. Around it sit the spread
//! estimators (snapshot coverage, diffusion simulation, exact enumeration),
//! an accelerated variant with per-snapshot covered sets and lazy
//! re-evaluation, a conventional resampling baseline, and an auditor for
//! the submodularity property.

pub mod error;
pub mod generate;
pub mod graph;
pub mod rng;
pub mod sampling;
pub mod selection;
pub mod spread;

mod visit;

pub use error::{Error, Result};
pub use graph::{
    assign_probabilities, parse_edge_list, write_edge_list, NodeId, ParsedEdgeList,
    ProbabilityModel, WeightedGraph,
};
pub use sampling::{sample_snapshot, sample_snapshot_set, Snapshot, SnapshotSet, Storage};
pub use selection::{
    check_submodularity, check_submodularity_across, conventional_greedy,
    conventional_greedy_over, degree_seeds, marginal_gain, random_seeds, static_greedy, static_greedy_du,
    static_greedy_du_over, static_greedy_over, SelectionResult, SubmodularityReport,
};
pub use spread::{
    exact_spread, reachable_count, simulate_spread, snapshot_spread, Estimator, SeedSet,
    SpreadEstimate,
};
