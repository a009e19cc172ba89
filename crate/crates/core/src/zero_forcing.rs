//! Zero forcing, derived sets, and the optimal augmentation that keeps the
//! derived set of a leader set unchanged.
//!
//! Coloring rule (in-neighbor convention): a black node with exactly one white
//! in-neighbor turns that in-neighbor black.

use alloc::vec;
use alloc::vec::Vec;

use crate::augment::{AugmentResult, BoundKind};
use crate::error::{Error, Result};
use crate::graph::{DiGraph, Edge, NodeId};

/// Ordered, duplicate-free, non-empty list of leader nodes.
///
/// Position `j` of a leader is the coordinate it owns in distance-to-leader
/// vectors and the column it owns in the input matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct LeaderSet(Vec<NodeId>);

impl LeaderSet {
    pub fn new(leaders: Vec<NodeId>, n: usize) -> Result<Self> {
        if leaders.is_empty() {
            return Err(Error::EmptyLeaderSet);
        }
        let mut seen = vec![false; n];
        for &l in &leaders {
            if l >= n {
                return Err(Error::NodeOutOfRange { node: l, n });
            }
            if seen[l] {
                return Err(Error::DuplicateLeader(l));
            }
            seen[l] = true;
        }
        Ok(LeaderSet(leaders))
    }

    /// Every node of an `n`-node graph, in id order.
    pub fn all(n: usize) -> Result<Self> {
        LeaderSet::new((0..n).collect(), n)
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.0.iter().copied()
    }

    /// Membership mask over `0..n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for l in self.iter() {
            mask[l] = true;
        }
        mask
    }

    pub(crate) fn check_for(&self, g: &DiGraph) -> Result<()> {
        for l in self.iter() {
            g.check_node(l)?;
        }
        Ok(())
    }
}

/// Fixed point of the zero-forcing process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZfResult {
    /// Membership mask of the derived set.
    pub black: Vec<bool>,
    /// `(forcer, forced)` pairs in the order the forces happened.
    pub forcing_order: Vec<Edge>,
}

impl ZfResult {
    pub fn size(&self) -> usize {
        self.black.iter().filter(|&&b| b).count()
    }

    /// Derived set in ascending id order.
    pub fn derived_set(&self) -> Vec<NodeId> {
        (0..self.black.len()).filter(|&v| self.black[v]).collect()
    }
}

/// Runs zero forcing from `leaders` to its fixed point.
///
/// At every step the smallest black node with exactly one white in-neighbor
/// forces. The resulting set does not depend on this choice; the recorded
/// order does.
pub fn derived_set(g: &DiGraph, leaders: &LeaderSet) -> Result<ZfResult> {
    leaders.check_for(g)?;
    let n = g.node_count();
    let mut black = leaders.mask(n);
    let mut white_in: Vec<usize> = (0..n)
        .map(|v| g.in_neighbors(v).iter().filter(|&&u| !black[u]).count())
        .collect();
    let mut forcing_order = Vec::new();
    while let Some(forcer) = (0..n).find(|&u| black[u] && white_in[u] == 1) {
        let forced = g
            .in_neighbors(forcer)
            .iter()
            .copied()
            .find(|&w| !black[w])
            .expect("white in-neighbor counted");
        black[forced] = true;
        for &y in g.out_neighbors(forced) {
            white_in[y] -= 1;
        }
        forcing_order.push((forcer, forced));
    }
    Ok(ZfResult {
        black,
        forcing_order,
    })
}

/// Zero-forcing lower bound: the size of the derived set.
pub fn zf_bound(g: &DiGraph, leaders: &LeaderSet) -> Result<usize> {
    Ok(derived_set(g, leaders)?.size())
}

/// Adds the maximum number of edges that keeps the derived set of `leaders`
/// unchanged.
///
/// Replays the forcing sequence: when `u` forces, `u` receives edges from
/// every node that is black at that moment. Every node that never forces then
/// receives edges from all other nodes, except when exactly one node `z` stays
/// white: a black node with `z` as an in-neighbor would force it, so black
/// non-forcers do not receive the edge from `z`.
pub fn augment_zf(g: &DiGraph, leaders: &LeaderSet) -> Result<AugmentResult> {
    let zf = derived_set(g, leaders)?;
    let n = g.node_count();
    let mut out = g.clone();
    let mut black = leaders.mask(n);
    let mut forced_something = vec![false; n];

    for &(u, v) in &zf.forcing_order {
        black[v] = true;
        forced_something[u] = true;
        for w in 0..n {
            if black[w] && w != u {
                out.insert(w, u);
            }
        }
    }

    let delta = zf.size();
    let lone_white = if n - delta == 1 {
        (0..n).find(|&v| !zf.black[v])
    } else {
        None
    };
    for u in (0..n).filter(|&u| !forced_something[u]) {
        for w in 0..n {
            if w == u || (zf.black[u] && Some(w) == lone_white) {
                continue;
            }
            out.insert(w, u);
        }
    }

    let added = out.edges().filter(|&(u, v)| !g.has_edge(u, v)).collect();
    Ok(AugmentResult {
        graph: out,
        added,
        bound_kind: BoundKind::ZeroForcing,
        bound_value: delta,
    })
}

/// Edge count of an optimal derived-set-preserving augmentation, for `n`
/// nodes, `m` leaders and a derived set of size `delta`:
///
/// `delta(delta+1)/2 - m(m+1)/2 + (m + n - delta)n - n`,
///
/// less `m` when `delta = n - 1` (the lone white node cannot point at any of
/// the `m` black nodes that never force). The count does not depend on the
/// topology beyond these three numbers.
pub fn closed_form_zf_edges(n: usize, m: usize, delta: usize) -> Result<usize> {
    if m == 0 || m > delta || delta > n {
        return Err(Error::invalid("require 1 <= m <= delta <= n"));
    }
    let total = delta * (delta + 1) / 2 - m * (m + 1) / 2 + (m + n - delta) * n - n;
    Ok(if n - delta == 1 { total - m } else { total })
}
