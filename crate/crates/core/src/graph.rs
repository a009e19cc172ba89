//! Immutable directed graphs, BFS distances and random generation.
//!
//! An edge `(u, v)` makes `u` an in-neighbor of `v`. In the Laplacian model the
//! state of `u` is driven by the state of `v`, so information about a leader
//! reaches `u` along directed paths `u -> ... -> leader`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use rand::Rng;

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type Edge = (NodeId, NodeId);

/// Shortest-path length in edges, or `Inf` when no directed path exists.
///
/// `Finite` sorts before `Inf`, and `Inf == Inf`, so `Inf < Inf` is false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dist {
    Finite(u32),
    Inf,
}

impl Dist {
    pub const ZERO: Dist = Dist::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Dist::Finite(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Dist::Finite(d) => Some(d),
            Dist::Inf => None,
        }
    }

    /// One more hop; `Inf` stays `Inf`.
    pub fn succ(self) -> Dist {
        match self {
            Dist::Finite(d) => Dist::Finite(d + 1),
            Dist::Inf => Dist::Inf,
        }
    }

    /// Compares against a signed integer bound (`Inf` is above every bound).
    pub fn cmp_int(self, bound: i64) -> Ordering {
        match self {
            Dist::Finite(d) => i64::from(d).cmp(&bound),
            Dist::Inf => Ordering::Greater,
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(d) => write!(f, "{d}"),
            Dist::Inf => f.write_str("inf"),
        }
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Dist {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        match self {
            Dist::Finite(d) => s.serialize_u32(*d),
            Dist::Inf => s.serialize_none(),
        }
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Dist {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let v: Option<u32> = serde::Deserialize::deserialize(d)?;
        Ok(v.map_or(Dist::Inf, Dist::Finite))
    }
}

/// Simple directed graph on nodes `0..n`: no self-loops, no parallel edges.
/// Equality compares node count and edge set only.
#[derive(Clone)]
pub struct DiGraph {
    n: usize,
    adj: Vec<bool>,
    out: Vec<Vec<NodeId>>,
    inc: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl PartialEq for DiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for DiGraph {}

impl fmt::Debug for DiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiGraph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl DiGraph {
    pub fn empty(n: usize) -> Self {
        DiGraph {
            n,
            adj: vec![false; n * n],
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = DiGraph::empty(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    g.insert(u, v);
                }
            }
        }
        g
    }

    /// Builds a graph, rejecting self-loops, out-of-range ids and duplicates.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut g = DiGraph::empty(n);
        for (u, v) in edges {
            g.check_pair(u, v)?;
            if !g.insert(u, v) {
                return Err(Error::DuplicateEdge(u, v));
            }
        }
        Ok(g)
    }

    /// Copy of `self` with `extra` added; edges already present are skipped.
    pub fn with_edges<I>(&self, extra: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut g = self.clone();
        for (u, v) in extra {
            g.check_pair(u, v)?;
            g.insert(u, v);
        }
        Ok(g)
    }

    fn check_pair(&self, u: NodeId, v: NodeId) -> Result<()> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        Ok(())
    }

    pub(crate) fn check_node(&self, u: NodeId) -> Result<()> {
        if u >= self.n {
            return Err(Error::NodeOutOfRange { node: u, n: self.n });
        }
        Ok(())
    }

    /// Inserts an edge assumed valid; returns false if it was already present.
    pub(crate) fn insert(&mut self, u: NodeId, v: NodeId) -> bool {
        debug_assert!(u != v && u < self.n && v < self.n);
        let slot = &mut self.adj[u * self.n + v];
        if *slot {
            return false;
        }
        *slot = true;
        self.out[u].push(v);
        self.inc[v].push(u);
        self.edge_count += 1;
        true
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.n && v < self.n && self.adj[u * self.n + v]
    }

    /// Nodes `v` with an edge `(u, v)`, in insertion order.
    pub fn out_neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.out[u]
    }

    /// Nodes `u` with an edge `(u, v)`, in insertion order.
    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.inc[v]
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.n;
        (0..n * n)
            .filter(move |&i| self.adj[i])
            .map(move |i| (i / n, i % n))
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count == self.n * self.n.saturating_sub(1)
    }

    /// Every missing ordered pair `(u, v)`, `u != v`, in lexicographic order.
    pub fn complement_edges(&self) -> Vec<Edge> {
        let n = self.n;
        let mut missing = Vec::with_capacity(n * n.saturating_sub(1) - self.edge_count);
        for u in 0..n {
            for v in 0..n {
                if u != v && !self.adj[u * n + v] {
                    missing.push((u, v));
                }
            }
        }
        missing
    }

    /// `d(u, target)` for every `u`, by BFS from `target` over reversed edges.
    pub fn bfs_distances_to(&self, target: NodeId) -> Result<Vec<Dist>> {
        self.check_node(target)?;
        Ok(bfs(self.n, target, |x| &self.inc[x]))
    }

    /// `d(source, v)` for every `v`.
    pub fn bfs_distances_from(&self, source: NodeId) -> Result<Vec<Dist>> {
        self.check_node(source)?;
        Ok(bfs(self.n, source, |x| &self.out[x]))
    }

    /// Single-pair distance `d(from, to)`.
    pub fn distance(&self, from: NodeId, to: NodeId) -> Result<Dist> {
        self.check_node(to)?;
        Ok(self.bfs_distances_from(from)?[to])
    }

    /// All-pairs distance matrix, row `u` holding `d(u, ·)`.
    pub fn all_pairs_distances(&self) -> Vec<Vec<Dist>> {
        (0..self.n)
            .map(|u| bfs(self.n, u, |x| &self.out[x]))
            .collect()
    }
}

fn bfs<'a, F>(n: usize, root: NodeId, next: F) -> Vec<Dist>
where
    F: Fn(NodeId) -> &'a [NodeId],
{
    let mut dist = vec![Dist::Inf; n];
    let mut queue = VecDeque::with_capacity(n);
    dist[root] = Dist::ZERO;
    queue.push_back((root, 0u32));
    while let Some((x, d)) = queue.pop_front() {
        for &y in next(x) {
            if dist[y] == Dist::Inf {
                dist[y] = Dist::Finite(d + 1);
                queue.push_back((y, d + 1));
            }
        }
    }
    dist
}

/// Erdős–Rényi digraph: every ordered pair `u != v`, scanned in lexicographic
/// order, is kept independently with probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Result<DiGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid("edge probability must lie in [0, 1]"));
    }
    let mut rng = crate::rng::stream(seed, 0);
    let mut g = DiGraph::empty(n);
    for u in 0..n {
        for v in 0..n {
            // gen::<f64>() is in [0, 1), so p = 1 keeps every pair.
            if u != v && rng.gen::<f64>() < p {
                g.insert(u, v);
            }
        }
    }
    Ok(g)
}
