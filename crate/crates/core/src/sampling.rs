//! Static Monte Carlo snapshots.
//!
//! A snapshot keeps each edge of the parent graph independently with its
//! probability `p(u, v)`. Snapshot `i` of a set is drawn from stream `i` of
//! the set's master seed, so a set is a pure function of `(graph, R, seed)`
//! regardless of how many workers generate it.

use std::io::{Read, Write};

use fixedbitset::FixedBitSet;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedGraph};
use crate::rng::{self, Domain};

const MAGIC: &[u8; 8] = b"SLSNAPS1";

/// Whether snapshots materialize their own adjacency or traverse the parent
/// graph through the edge mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Storage {
    #[default]
    Full,
    MaskOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Adjacency {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

/// One sampled subgraph `G' = (V, E')` of a parent graph.
#[derive(Clone, Debug)]
pub struct Snapshot<'g> {
    parent: &'g WeightedGraph,
    mask: FixedBitSet,
    adjacency: Option<Adjacency>,
}

impl PartialEq for Snapshot<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.parent, other.parent) && self.mask == other.mask
    }
}

impl<'g> Snapshot<'g> {
    /// Builds a snapshot from an explicit edge mask (bit `e` set = edge `e`
    /// retained).
    pub fn from_mask(parent: &'g WeightedGraph, mask: FixedBitSet, storage: Storage) -> Result<Self> {
        if mask.len() != parent.edge_count() {
            return Err(Error::Argument(format!(
                "mask has {} bits, graph has {} edges",
                mask.len(),
                parent.edge_count()
            )));
        }
        let adjacency = match storage {
            Storage::Full => Some(build_adjacency(parent, &mask)),
            Storage::MaskOnly => None,
        };
        Ok(Snapshot { parent, mask, adjacency })
    }

    /// Builds a snapshot that retains exactly the listed `(source, target)`
    /// edges of the parent.
    pub fn from_retained(
        parent: &'g WeightedGraph,
        retained: &[(NodeId, NodeId)],
        storage: Storage,
    ) -> Result<Self> {
        let mut mask = FixedBitSet::with_capacity(parent.edge_count());
        for &(u, v) in retained {
            let e = parent
                .out_edge_range(u)
                .find(|&e| parent.target(e) == v)
                .ok_or_else(|| Error::Argument(format!("edge ({u}, {v}) not in parent graph")))?;
            mask.insert(e);
        }
        Self::from_mask(parent, mask, storage)
    }

    pub fn parent(&self) -> &'g WeightedGraph {
        self.parent
    }

    pub fn mask(&self) -> &FixedBitSet {
        &self.mask
    }

    pub fn is_retained(&self, edge: usize) -> bool {
        self.mask.contains(edge)
    }

    pub fn retained_count(&self) -> usize {
        self.mask.count_ones(..)
    }

    pub fn node_count(&self) -> usize {
        self.parent.node_count()
    }

    /// Calls `f` for every out-neighbour of `u` over retained edges.
    #[inline]
    pub fn for_each_neighbor(&self, u: u32, mut f: impl FnMut(u32)) {
        match &self.adjacency {
            Some(adj) => {
                let (lo, hi) = (adj.offsets[u as usize] as usize, adj.offsets[u as usize + 1] as usize);
                adj.targets[lo..hi].iter().for_each(|&v| f(v));
            }
            None => {
                let offsets = self.parent.offsets();
                let targets = self.parent.targets();
                for e in offsets[u as usize] as usize..offsets[u as usize + 1] as usize {
                    if self.mask.contains(e) {
                        f(targets[e]);
                    }
                }
            }
        }
    }

    pub fn out_neighbors(&self, u: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        self.for_each_neighbor(u.0, |v| out.push(NodeId(v)));
        out
    }
}

fn build_adjacency(g: &WeightedGraph, mask: &FixedBitSet) -> Adjacency {
    let n = g.node_count();
    let (offsets, targets) = (g.offsets(), g.targets());
    let mut out_offsets = Vec::with_capacity(n + 1);
    let mut out_targets = Vec::with_capacity(mask.count_ones(..));
    out_offsets.push(0u32);
    for u in 0..n {
        for e in offsets[u] as usize..offsets[u + 1] as usize {
            if mask.contains(e) {
                out_targets.push(targets[e]);
            }
        }
        out_offsets.push(out_targets.len() as u32);
    }
    Adjacency { offsets: out_offsets, targets: out_targets }
}

/// Samples one snapshot: edge `e` is retained iff the next draw from
/// `stream` is `< p(e)`. One draw is consumed per edge, in edge-index order.
pub fn sample_snapshot<'g, R: Rng + ?Sized>(
    g: &'g WeightedGraph,
    stream: &mut R,
    storage: Storage,
) -> Result<Snapshot<'g>> {
    require_probabilities(g)?;
    Ok(draw(g, stream, storage))
}

fn draw<'g, R: Rng + ?Sized>(g: &'g WeightedGraph, stream: &mut R, storage: Storage) -> Snapshot<'g> {
    let probs = g.raw_probabilities();
    let mut mask = FixedBitSet::with_capacity(probs.len());
    for (e, &p) in probs.iter().enumerate() {
        if stream.gen::<f64>() < p {
            mask.insert(e);
        }
    }
    Snapshot::from_mask(g, mask, storage).expect("mask sized to the parent")
}

fn require_probabilities(g: &WeightedGraph) -> Result<()> {
    if g.probabilities_assigned() {
        Ok(())
    } else {
        Err(Error::Config("edge probabilities are not assigned".into()))
    }
}

/// An ordered, immutable collection of `R` snapshots of one parent graph.
#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotSet<'g> {
    parent: &'g WeightedGraph,
    snapshots: Vec<Snapshot<'g>>,
    rng_seed: u64,
}

/// Samples `r` snapshots, snapshot `i` from stream `(rng_seed, i)`.
pub fn sample_snapshot_set(g: &WeightedGraph, r: usize, rng_seed: u64) -> Result<SnapshotSet<'_>> {
    SnapshotSet::sample(g, r, rng_seed, Storage::Full)
}

impl<'g> SnapshotSet<'g> {
    pub fn sample(g: &'g WeightedGraph, r: usize, rng_seed: u64, storage: Storage) -> Result<Self> {
        if r < 1 {
            return Err(Error::Argument("snapshot count R must be at least 1".into()));
        }
        require_probabilities(g)?;
        let snapshots = (0..r as u64)
            .into_par_iter()
            .map(|i| draw(g, &mut rng::stream(rng_seed, Domain::Snapshot, i), storage))
            .collect();
        Ok(SnapshotSet { parent: g, snapshots, rng_seed })
    }

    /// Wraps explicitly constructed snapshots. `rng_seed` is provenance only.
    pub fn from_snapshots(g: &'g WeightedGraph, snapshots: Vec<Snapshot<'g>>, rng_seed: u64) -> Result<Self> {
        if snapshots.is_empty() {
            return Err(Error::Argument("snapshot set must not be empty".into()));
        }
        if snapshots.iter().any(|s| !std::ptr::eq(s.parent, g)) {
            return Err(Error::Argument("snapshot belongs to a different graph".into()));
        }
        Ok(SnapshotSet { parent: g, snapshots, rng_seed })
    }

    pub fn parent(&self) -> &'g WeightedGraph {
        self.parent
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn snapshots(&self) -> &[Snapshot<'g>] {
        &self.snapshots
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Snapshot<'g>> {
        self.snapshots.iter()
    }

    /// Cache format: magic, parent content hash, R, seed and edge count as
    /// little-endian u64, then one mask per snapshot with edge `e` at bit
    /// `e % 8` of byte `e / 8`.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        let edges = self.parent.edge_count();
        out.write_all(MAGIC)?;
        out.write_all(&self.parent.content_hash())?;
        out.write_all(&(self.len() as u64).to_le_bytes())?;
        out.write_all(&self.rng_seed.to_le_bytes())?;
        out.write_all(&(edges as u64).to_le_bytes())?;
        let mut buf = vec![0u8; edges.div_ceil(8)];
        for snap in &self.snapshots {
            buf.iter_mut().for_each(|b| *b = 0);
            for e in snap.mask.ones() {
                buf[e / 8] |= 1 << (e % 8);
            }
            out.write_all(&buf)?;
        }
        Ok(())
    }

    /// Reads a cache written by [`SnapshotSet::write_to`], refusing it unless
    /// it was produced from a graph with the same content hash.
    pub fn read_from<R: Read>(g: &'g WeightedGraph, mut input: R, storage: Storage) -> Result<Self> {
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Cache("not a snapshot cache file".into()));
        }
        let mut hash = [0u8; 32];
        input.read_exact(&mut hash)?;
        if hash != g.content_hash() {
            return Err(Error::Cache("content hash does not match the graph".into()));
        }
        let mut word = [0u8; 8];
        let mut next_u64 = |input: &mut R| -> Result<u64> {
            input.read_exact(&mut word)?;
            Ok(u64::from_le_bytes(word))
        };
        let r = next_u64(&mut input)? as usize;
        let rng_seed = next_u64(&mut input)?;
        let edges = next_u64(&mut input)? as usize;
        if edges != g.edge_count() || r == 0 {
            return Err(Error::Cache(format!("header declares R={r}, {edges} edges")));
        }
        let mut buf = vec![0u8; edges.div_ceil(8)];
        let mut snapshots = Vec::with_capacity(r);
        for _ in 0..r {
            input.read_exact(&mut buf)?;
            let mut mask = FixedBitSet::with_capacity(edges);
            for e in 0..edges {
                if buf[e / 8] >> (e % 8) & 1 == 1 {
                    mask.insert(e);
                }
            }
            snapshots.push(Snapshot::from_mask(g, mask, storage)?);
        }
        Ok(SnapshotSet { parent: g, snapshots, rng_seed })
    }
}

impl<'a, 'g> IntoIterator for &'a SnapshotSet<'g> {
    type Item = &'a Snapshot<'g>;
    type IntoIter = std::slice::Iter<'a, Snapshot<'g>>;

    fn into_iter(self) -> Self::IntoIter {
        self.snapshots.iter()
    }
}
