//! Undirected topologies and exact path metrics.
//!
//! [`Topology`] stores a graph as sorted adjacency lists together with the
//! lattice it lives on and its nominal degree. Average shortest path length
//! (ASPL) and diameter are computed exactly by per-root breadth-first
//! search; [`Topology::aspl_oracle`] recomputes ASPL by Floyd-Warshall as an
//! independent cross-check and deliberately shares no code with the BFS
//! route.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Constellation;
use crate::Frac;

/// Run per-root BFS fan-out in parallel above this node count.
const PARALLEL_THRESHOLD: usize = 256;

/// Largest graph accepted by the Floyd-Warshall cross-check.
const ORACLE_NODE_CAP: usize = 500;

/// Where a topology came from: a construction name plus its parameters.
/// Carried through serialization so a graph file is self-describing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: String,
    pub params: serde_json::Value,
}

/// An undirected graph on the nodes of a [`Constellation`], with a nominal
/// degree `delta` that constructions are expected to meet exactly.
#[derive(Debug, Clone)]
pub struct Topology {
    c: Constellation,
    delta: usize,
    adj: Vec<Vec<u32>>,
    provenance: Option<Provenance>,
}

/// Node counts per BFS level from one root: `counts[l]` nodes at distance
/// `l`, with `counts[0] == 1` for the root itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopProfile {
    pub counts: Vec<u64>,
    pub unreachable: u64,
}

impl HopProfile {
    /// Sum of `l * counts[l]`: total distance from the root to all reached
    /// nodes.
    pub fn weighted_sum(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(l, &c)| l as u64 * c)
            .sum()
    }

    /// Distance to the farthest reached node.
    pub fn eccentricity(&self) -> usize {
        self.counts.len() - 1
    }
}

/// Outcome of structural validation, reported rather than enforced so that
/// callers can inspect graphs loaded from external files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationReport {
    pub is_simple: bool,
    pub is_regular: bool,
    pub is_connected: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.is_simple && self.is_regular && self.is_connected
    }
}

impl Topology {
    /// Builds a topology from an undirected edge list, rejecting self-loops,
    /// duplicate edges, and out-of-range endpoints.
    pub fn from_edges(
        c: Constellation,
        delta: usize,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Topology> {
        let t = Topology::from_edges_unchecked(c, delta, edges);
        let n = t.n();
        for (v, nbrs) in t.adj.iter().enumerate() {
            for pair in nbrs.windows(2) {
                if pair[0] == pair[1] {
                    return Err(Error::InvalidTopology(format!(
                        "duplicate edge ({v}, {})",
                        pair[0]
                    )));
                }
            }
            if nbrs.iter().any(|&u| u as usize == v) {
                return Err(Error::InvalidTopology(format!("self-loop at node {v}")));
            }
            if nbrs.iter().any(|&u| u as usize >= n) {
                return Err(Error::InvalidTopology(format!(
                    "edge endpoint out of range at node {v}"
                )));
            }
        }
        Ok(t)
    }

    /// Assembles adjacency lists without structural checks. Intended for
    /// loaders and tests that inspect invalid graphs via [`Topology::validate`].
    pub fn from_edges_unchecked(
        c: Constellation,
        delta: usize,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Topology {
        let n = c.n();
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if (u as usize) < n {
                adj[u as usize].push(v);
            }
            if (v as usize) < n {
                adj[v as usize].push(u);
            }
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        Topology {
            c,
            delta,
            adj,
            provenance: None,
        }
    }

    pub fn with_provenance(mut self, kind: &str, params: serde_json::Value) -> Topology {
        self.provenance = Some(Provenance {
            kind: kind.to_string(),
            params,
        });
        self
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn constellation(&self) -> Constellation {
        self.c
    }

    pub fn n(&self) -> usize {
        self.c.n()
    }

    /// Nominal degree; [`Topology::validate`] checks the graph meets it.
    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Undirected edge list, normalized `u < v` and sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for (v, nbrs) in self.adj.iter().enumerate() {
            let v = v as u32;
            for &u in nbrs {
                if v < u {
                    out.push((v, u));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Inserts an edge, keeping neighbor lists sorted. The caller guarantees
    /// the edge is absent and not a self-loop; edge-swap moves do.
    pub(crate) fn add_edge_unchecked(&mut self, u: u32, v: u32) {
        debug_assert_ne!(u, v);
        for (a, b) in [(u, v), (v, u)] {
            let nbrs = &mut self.adj[a as usize];
            let at = nbrs.binary_search(&b).expect_err("edge already present");
            nbrs.insert(at, b);
        }
    }

    /// Removes an existing edge, keeping neighbor lists sorted.
    pub(crate) fn remove_edge_unchecked(&mut self, u: u32, v: u32) {
        for (a, b) in [(u, v), (v, u)] {
            let nbrs = &mut self.adj[a as usize];
            let at = nbrs.binary_search(&b).expect("edge not present");
            nbrs.remove(at);
        }
    }

    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for nbrs in &self.adj {
            *hist.entry(nbrs.len()).or_insert(0) += 1;
        }
        hist
    }

    pub fn validate(&self) -> ValidationReport {
        let mut simple = true;
        for (v, nbrs) in self.adj.iter().enumerate() {
            if nbrs.iter().any(|&u| u as usize == v)
                || nbrs.windows(2).any(|pair| pair[0] == pair[1])
            {
                simple = false;
                break;
            }
        }
        let regular = self.adj.iter().all(|nbrs| nbrs.len() == self.delta);
        let connected = self.n() > 0 && self.bfs_profile(0).unreachable == 0;
        ValidationReport {
            is_simple: simple,
            is_regular: regular,
            is_connected: connected,
        }
    }

    /// Per-level node counts of a BFS from `root`.
    pub fn bfs_profile(&self, root: u32) -> HopProfile {
        let n = self.n();
        let mut dist = vec![u32::MAX; n];
        let mut queue = VecDeque::new();
        dist[root as usize] = 0;
        queue.push_back(root);
        let mut counts = vec![0u64];
        counts[0] = 1;
        let mut reached = 1u64;
        while let Some(v) = queue.pop_front() {
            let next = dist[v as usize] + 1;
            for &u in &self.adj[v as usize] {
                if dist[u as usize] == u32::MAX {
                    dist[u as usize] = next;
                    if counts.len() <= next as usize {
                        counts.push(0);
                    }
                    counts[next as usize] += 1;
                    reached += 1;
                    queue.push_back(u);
                }
            }
        }
        HopProfile {
            counts,
            unreachable: n as u64 - reached,
        }
    }

    fn per_root_sums(&self) -> Result<Vec<(u64, usize)>> {
        let n = self.n();
        if n == 0 {
            return Err(Error::InvalidArgument("empty graph".into()));
        }
        let root0 = self.bfs_profile(0);
        if root0.unreachable > 0 {
            return Err(Error::DisconnectedGraph {
                root: 0,
                unreachable: root0.unreachable as usize,
                n,
            });
        }
        let sum_ecc = |root: u32| {
            let p = self.bfs_profile(root);
            (p.weighted_sum(), p.eccentricity())
        };
        // Connectivity is symmetric, so reaching everything from node 0 means
        // every other root does too.
        let sums = if n >= PARALLEL_THRESHOLD {
            (0..n as u32).into_par_iter().map(sum_ecc).collect()
        } else {
            (0..n as u32).map(sum_ecc).collect()
        };
        Ok(sums)
    }

    /// Total shortest-path distance over ordered node pairs.
    pub fn pair_distance_sum(&self) -> Result<u128> {
        Ok(self
            .per_root_sums()?
            .iter()
            .map(|&(s, _)| s as u128)
            .sum())
    }

    /// Average shortest path length over ordered distinct pairs, exact.
    pub fn aspl_frac(&self) -> Result<Frac> {
        let n = self.n() as u128;
        if n < 2 {
            return Err(Error::InvalidArgument("aspl needs at least 2 nodes".into()));
        }
        Ok(Frac::new(self.pair_distance_sum()?, n * (n - 1)))
    }

    /// Average shortest path length over ordered distinct pairs.
    pub fn aspl(&self) -> Result<f64> {
        let n = self.n() as f64;
        Ok(self.pair_distance_sum()? as f64 / (n * (n - 1.0)))
    }

    /// Largest shortest-path distance between any node pair.
    pub fn diameter(&self) -> Result<usize> {
        Ok(self
            .per_root_sums()?
            .iter()
            .map(|&(_, e)| e)
            .max()
            .unwrap_or(0))
    }

    /// ASPL and diameter from a single metric pass.
    pub fn path_metrics(&self) -> Result<(Frac, usize)> {
        let sums = self.per_root_sums()?;
        let n = self.n() as u128;
        let total: u128 = sums.iter().map(|&(s, _)| s as u128).sum();
        let diameter = sums.iter().map(|&(_, e)| e).max().unwrap_or(0);
        Ok((Frac::new(total, n * (n - 1)), diameter))
    }

    /// Whether every root sees the same multiset of shortest-path distances.
    /// True for vertex-transitive graphs; a cheap necessary condition for
    /// vertex symmetry.
    pub fn distance_multiset_uniform(&self) -> Result<bool> {
        let n = self.n();
        let reference = self.bfs_profile(0);
        if reference.unreachable > 0 {
            return Err(Error::DisconnectedGraph {
                root: 0,
                unreachable: reference.unreachable as usize,
                n,
            });
        }
        let check = |root: u32| self.bfs_profile(root).counts == reference.counts;
        if n >= PARALLEL_THRESHOLD {
            Ok((1..n as u32).into_par_iter().all(check))
        } else {
            Ok((1..n as u32).all(check))
        }
    }

    /// ASPL recomputed by Floyd-Warshall on a dense distance matrix. An
    /// independent cross-check for [`Topology::aspl`], capped at
    /// 500 nodes because of its cubic cost.
    pub fn aspl_oracle(&self) -> Result<f64> {
        let n = self.n();
        if n > ORACLE_NODE_CAP {
            return Err(Error::InvalidArgument(format!(
                "aspl_oracle is capped at {ORACLE_NODE_CAP} nodes, got {n}"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidArgument("aspl needs at least 2 nodes".into()));
        }
        const INF: u32 = u32::MAX / 2;
        let mut dist = vec![INF; n * n];
        for v in 0..n {
            dist[v * n + v] = 0;
            for &u in &self.adj[v] {
                dist[v * n + u as usize] = 1;
            }
        }
        for k in 0..n {
            for i in 0..n {
                let dik = dist[i * n + k];
                if dik == INF {
                    continue;
                }
                for j in 0..n {
                    let through = dik + dist[k * n + j];
                    if through < dist[i * n + j] {
                        dist[i * n + j] = through;
                    }
                }
            }
        }
        let mut total = 0u128;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let d = dist[i * n + j];
                if d >= INF {
                    return Err(Error::DisconnectedGraph {
                        root: i as u32,
                        unreachable: 1,
                        n,
                    });
                }
                total += d as u128;
            }
        }
        Ok(total as f64 / (n as f64 * (n as f64 - 1.0)))
    }
}
