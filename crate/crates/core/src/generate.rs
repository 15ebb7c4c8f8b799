//! Synthetic graph generators. Probabilities are left unassigned.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::rng::{self, Domain};

/// Directed G(n, m) graph with `m = round(n * avg_out_degree)` distinct
/// ordered pairs chosen uniformly, no self-loops.
pub fn erdos_renyi(n: usize, avg_out_degree: f64, seed: u64) -> Result<WeightedGraph> {
    if !(avg_out_degree >= 0.0) {
        return Err(Error::Argument(format!("average degree {avg_out_degree} must be >= 0")));
    }
    let possible = n.saturating_mul(n.saturating_sub(1));
    let m = ((n as f64 * avg_out_degree).round() as usize).min(possible);
    let mut rng = rng::stream(seed, Domain::Generator, 0);

    let edges: Vec<(u32, u32)> = if m * 2 > possible {
        let mut all: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|u| (0..n as u32).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        all.shuffle(&mut rng);
        all.truncate(m);
        all
    } else {
        let mut seen = HashSet::with_capacity(m);
        let mut edges = Vec::with_capacity(m);
        while edges.len() < m {
            let u = rng.gen_range(0..n as u32);
            let v = rng.gen_range(0..n as u32);
            if u != v && seen.insert((u, v)) {
                edges.push((u, v));
            }
        }
        edges
    };
    WeightedGraph::from_edges(n, edges.into_iter().map(|(u, v)| (u, v, None)))
}

/// Preferential attachment: each arriving node links to `round(avg_degree / 2)`
/// distinct earlier nodes picked proportionally to degree, and every link is
/// emitted in both directions so the average out-degree is close to
/// `avg_degree`.
pub fn preferential_attachment(n: usize, avg_degree: f64, seed: u64) -> Result<WeightedGraph> {
    if !(avg_degree >= 0.0) {
        return Err(Error::Argument(format!("average degree {avg_degree} must be >= 0")));
    }
    let per_node = ((avg_degree / 2.0).round() as usize).max(1);
    let mut rng = rng::stream(seed, Domain::Generator, 1);
    let mut edges = Vec::new();
    // one entry per edge endpoint; sampling uniformly from it is degree-proportional
    let mut endpoints: Vec<u32> = Vec::new();

    let core = (per_node + 1).min(n);
    for u in 0..core as u32 {
        for v in 0..u {
            edges.push((u, v));
            edges.push((v, u));
            endpoints.extend([u, v]);
        }
    }
    for t in core as u32..n as u32 {
        let mut chosen = Vec::with_capacity(per_node);
        while chosen.len() < per_node.min(t as usize) {
            let candidate = if endpoints.is_empty() {
                rng.gen_range(0..t)
            } else {
                endpoints[rng.gen_range(0..endpoints.len())]
            };
            if !chosen.contains(&candidate) {
                chosen.push(candidate);
            }
        }
        for &x in &chosen {
            edges.push((t, x));
            edges.push((x, t));
            endpoints.extend([t, x]);
        }
    }
    WeightedGraph::from_edges(n, edges.into_iter().map(|(u, v)| (u, v, None)))
}
