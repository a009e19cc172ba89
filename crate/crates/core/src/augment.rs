//! Distance-preserving edge augmentation for one node pair, and randomized
//! augmentation that keeps a PMI sequence (hence the distance bound) alive.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, Dist, Edge, NodeId};
use crate::pmi::{dl_matrix, PmiSequence};
use crate::rng;
use crate::zero_forcing::LeaderSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum BoundKind {
    #[cfg_attr(feature = "serde", serde(rename = "zf"))]
    ZeroForcing,
    #[cfg_attr(feature = "serde", serde(rename = "distance"))]
    Distance,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::ZeroForcing => "zf",
            BoundKind::Distance => "distance",
        }
    }
}

/// Augmented graph plus the bound it was built to preserve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentResult {
    pub graph: DiGraph,
    /// Added edges in lexicographic order.
    pub added: Vec<Edge>,
    pub bound_kind: BoundKind,
    pub bound_value: usize,
}

/// Levels of a distance-preserving augmentation: `level(v) = d(a, v)` in the
/// augmented graph, `level(a) = 0`, `level(b) = k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelPartition {
    pub levels: Vec<Dist>,
    pub k: u32,
}

impl LevelPartition {
    /// Whether an edge `(u, v)` is compatible with the levels:
    /// `level(u) >= level(v) - 1`.
    pub fn allows(&self, u: NodeId, v: NodeId) -> bool {
        match (self.levels[u], self.levels[v]) {
            (Dist::Inf, _) => true,
            (_, Dist::Inf) => false,
            (Dist::Finite(lu), Dist::Finite(lv)) => lu + 1 >= lv,
        }
    }
}

/// Adding `(u, v)` keeps `d(a, b) >= k`, given `d(a, ·)` and `d(·, b)`.
fn keeps_distance(from_a: &[Dist], to_b: &[Dist], u: NodeId, v: NodeId, k: u32) -> bool {
    match (from_a[u], to_b[v]) {
        (Dist::Finite(x), Dist::Finite(y)) => x + 1 + y >= k,
        _ => true,
    }
}

/// Distance-preserving edge augmentation for the pair `(a, b)`.
///
/// Scans missing edges lexicographically and keeps `(u, v)` whenever
/// `d(a, u) + 1 + d(v, b) >= k`, recomputing both distance arrays after every
/// addition, until a full scan adds nothing. Once every node lies on a
/// shortest `a -> b` path this test is exactly `d(a, u) >= d(a, v) - 1`; the
/// general form also pulls in nodes that start farther than `k` from `a` or
/// unreachable from it.
///
/// The result is inclusion-maximal. For `k >= 2` every node ends on a shortest
/// `a -> b` path and `(u, v)` is an edge iff `level(u) >= level(v) - 1`. For
/// `k <= 1` no edge can shorten the distance and the result is complete.
pub fn dpea(g: &DiGraph, a: NodeId, b: NodeId) -> Result<(DiGraph, LevelPartition)> {
    let k = match g.distance(a, b)? {
        Dist::Finite(k) => k,
        Dist::Inf => return Err(Error::Unreachable { from: a, to: b }),
    };
    let n = g.node_count();
    let mut out = g.clone();
    if k <= 1 {
        for (u, v) in g.complement_edges() {
            out.insert(u, v);
        }
    } else {
        let mut from_a = out.bfs_distances_from(a)?;
        let mut to_b = out.bfs_distances_to(b)?;
        loop {
            let mut grew = false;
            for u in 0..n {
                for v in 0..n {
                    if u == v || out.has_edge(u, v) {
                        continue;
                    }
                    if keeps_distance(&from_a, &to_b, u, v, k) {
                        out.insert(u, v);
                        from_a = out.bfs_distances_from(a)?;
                        to_b = out.bfs_distances_to(b)?;
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
    }
    let levels = out.bfs_distances_from(a)?;
    debug_assert_eq!(levels[b], Dist::Finite(k));
    Ok((out, LevelPartition { levels, k }))
}

/// `G` plus the edges common to the DPEA solutions of every listed pair.
///
/// Each DPEA solution contains `G`, so the intersection does too, and every
/// listed distance survives because the result is a subgraph of each solution.
pub fn dpea_common_edges(g: &DiGraph, pairs: &[(NodeId, NodeId)]) -> Result<DiGraph> {
    let Some((&(a0, b0), rest)) = pairs.split_first() else {
        return Err(Error::invalid("at least one node pair is required"));
    };
    let mut common = dpea(g, a0, b0)?.0;
    for &(a, b) in rest {
        let solution = dpea(g, a, b)?.0;
        let mut kept = DiGraph::empty(g.node_count());
        for (u, v) in common.edges().filter(|&(u, v)| solution.has_edge(u, v)) {
            kept.insert(u, v);
        }
        common = kept;
    }
    Ok(common)
}

/// Checks that `seq` is a PMI sequence of `g`'s DL vectors with a consistent
/// certificate.
fn check_sequence(g: &DiGraph, leaders: &LeaderSet, seq: &PmiSequence) -> Result<()> {
    let dl = dl_matrix(g, leaders)?;
    let rebuilt = PmiSequence::from_nodes(&dl, seq.nodes.clone())?;
    let consistent = rebuilt.vectors == seq.vectors
        && crate::pmi::verify_witnesses(&seq.vectors, &seq.witnesses)
        && crate::pmi::epsilon_star(&seq.vectors, &seq.witnesses)? == seq.eps_star;
    if consistent {
        Ok(())
    } else {
        Err(Error::invalid(
            "sequence does not match the graph's distance-to-leader vectors",
        ))
    }
}

/// Whether every sequence entry of `g` lies in its window
/// `ε*[i][j] < d(s_i, l_j) <= D_i[j]`.
pub fn respects_windows(g: &DiGraph, leaders: &LeaderSet, seq: &PmiSequence) -> Result<bool> {
    let dl = dl_matrix(g, leaders)?;
    for (i, &s) in seq.nodes.iter().enumerate() {
        for (j, &d) in dl.row(s).iter().enumerate() {
            if d > seq.vectors[i][j] || d.cmp_int(seq.eps_star[i][j]).is_le() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

const FAR: u32 = u32::MAX;

/// Dense all-pairs distances kept current under single-edge insertions.
struct Distances {
    n: usize,
    d: Vec<u32>,
}

impl Distances {
    fn new(g: &DiGraph) -> Self {
        let n = g.node_count();
        let mut d = vec![FAR; n * n];
        for (u, row) in g.all_pairs_distances().into_iter().enumerate() {
            for (v, dist) in row.into_iter().enumerate() {
                d[u * n + v] = dist.finite().unwrap_or(FAR);
            }
        }
        Distances { n, d }
    }

    fn get(&self, u: NodeId, v: NodeId) -> u32 {
        self.d[u * self.n + v]
    }

    /// Length through a new edge `(u, v)` from `x` to `y`, if both legs exist.
    fn via(&self, x: NodeId, u: NodeId, v: NodeId, y: NodeId) -> Option<u32> {
        let (xu, vy) = (self.get(x, u), self.get(v, y));
        (xu != FAR && vy != FAR).then(|| xu + 1 + vy)
    }

    /// `d'(x, y) = min(d(x, y), d(x, u) + 1 + d(v, y))`. Rows whose distance to
    /// `v` does not improve cannot improve anywhere else.
    fn insert(&mut self, u: NodeId, v: NodeId) {
        let n = self.n;
        for x in 0..n {
            let xu = self.get(x, u);
            if xu == FAR || xu + 1 >= self.get(x, v) {
                continue;
            }
            for y in 0..n {
                let vy = self.d[v * n + y];
                if vy != FAR && xu + 1 + vy < self.d[x * n + y] {
                    self.d[x * n + y] = xu + 1 + vy;
                }
            }
        }
    }
}

fn run_randomized<R: Rng>(
    g: &DiGraph,
    leaders: &LeaderSet,
    seq: &PmiSequence,
    rng: &mut R,
) -> AugmentResult {
    let mut candidates = g.complement_edges();
    candidates.shuffle(rng);
    let mut dist = Distances::new(g);
    let mut out = g.clone();
    let leaders = leaders.as_slice();

    for (u, v) in candidates {
        // Distances only shrink, so only the strict lower bounds can break.
        let breaks = seq.nodes.iter().enumerate().any(|(i, &s)| {
            leaders.iter().enumerate().any(|(j, &l)| {
                dist.via(s, u, v, l)
                    .is_some_and(|through| i64::from(through) <= seq.eps_star[i][j])
            })
        });
        if !breaks {
            out.insert(u, v);
            dist.insert(u, v);
        }
    }

    let added = out.edges().filter(|&(u, v)| !g.has_edge(u, v)).collect();
    AugmentResult {
        graph: out,
        added,
        bound_kind: BoundKind::Distance,
        bound_value: seq.len(),
    }
}

/// One run of the randomized distance-bound augmentation.
///
/// Missing edges are visited in a random order drawn from `(seed, run)`. An
/// edge is kept iff, with it added, every sequence entry still satisfies
/// `ε*[i][j] < d(s_i, l_j) <= D_i[j]`; the sequence nodes then still form a
/// PMI sequence of the same length.
pub fn augment_distance_run(
    g: &DiGraph,
    leaders: &LeaderSet,
    seq: &PmiSequence,
    seed: u64,
    run: u64,
) -> Result<AugmentResult> {
    check_sequence(g, leaders, seq)?;
    Ok(run_randomized(g, leaders, seq, &mut rng::stream(seed, run)))
}

/// Single randomized run; identical to run 0 of [`augment_distance_best_of`].
pub fn augment_distance_randomized(
    g: &DiGraph,
    leaders: &LeaderSet,
    seq: &PmiSequence,
    seed: u64,
) -> Result<AugmentResult> {
    augment_distance_run(g, leaders, seq, seed, 0)
}

/// Runs `c` independent randomized augmentations (runs `0..c` of `seed`) and
/// keeps the one with the most edges, the earliest run on ties.
pub fn augment_distance_best_of(
    g: &DiGraph,
    leaders: &LeaderSet,
    seq: &PmiSequence,
    seed: u64,
    c: usize,
) -> Result<AugmentResult> {
    if c == 0 {
        return Err(Error::invalid("repeat count must be at least 1"));
    }
    check_sequence(g, leaders, seq)?;
    let mut best: Option<AugmentResult> = None;
    for run in 0..c as u64 {
        let result = run_randomized(g, leaders, seq, &mut rng::stream(seed, run));
        if best
            .as_ref()
            .is_none_or(|b| result.graph.edge_count() > b.graph.edge_count())
        {
            best = Some(result);
        }
    }
    Ok(best.expect("c >= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmi::{dl_matrix, longest_pmi_exact};

    #[test]
    fn dpea_on_path() {
        let g = DiGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let (h, part) = dpea(&g, 0, 2).unwrap();
        assert_eq!(
            h.edges().collect::<Vec<_>>(),
            vec![(0, 1), (1, 0), (1, 2), (2, 0), (2, 1)]
        );
        assert_eq!(part.k, 2);
        assert_eq!(
            part.levels,
            vec![Dist::Finite(0), Dist::Finite(1), Dist::Finite(2)]
        );
    }

    #[test]
    fn dpea_adjacent_pair_is_complete() {
        let g = DiGraph::from_edges(5, [(3, 1)]).unwrap();
        let (h, part) = dpea(&g, 3, 1).unwrap();
        assert!(h.is_complete());
        assert_eq!(part.k, 1);
    }

    #[test]
    fn dpea_unreachable() {
        let g = DiGraph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(
            dpea(&g, 1, 0).unwrap_err(),
            Error::Unreachable { from: 1, to: 0 }
        );
    }

    #[test]
    fn dpea_pulls_in_far_and_unreachable_nodes() {
        // 0 -> 1 -> 2 -> 3 with node 4 hanging off 3 and node 5 isolated.
        let g = DiGraph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let (h, part) = dpea(&g, 0, 3).unwrap();
        assert_eq!(h.distance(0, 3).unwrap(), Dist::Finite(3));
        for v in 0..6 {
            let via = h.distance(0, v).unwrap().finite().unwrap()
                + h.distance(v, 3).unwrap().finite().unwrap();
            assert_eq!(via, 3, "node {v}");
        }
        for u in 0..6 {
            for v in 0..6 {
                if u != v {
                    assert_eq!(h.has_edge(u, v), part.allows(u, v), "({u},{v})");
                }
            }
        }
    }

    #[test]
    fn common_edges_single_pair() {
        let g = DiGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(
            dpea_common_edges(&g, &[(0, 3)]).unwrap(),
            dpea(&g, 0, 3).unwrap().0
        );
        assert!(dpea_common_edges(&g, &[]).is_err());
        assert!(dpea_common_edges(&g, &[(3, 0)]).is_err());
    }

    #[test]
    fn common_edges_on_complete_graph() {
        let g = DiGraph::complete(4);
        assert!(dpea_common_edges(&g, &[(0, 1), (2, 3)])
            .unwrap()
            .is_complete());
    }

    #[test]
    fn randomized_on_complete_graph_adds_nothing() {
        let g = DiGraph::complete(5);
        let l = LeaderSet::new(vec![0, 1], 5).unwrap();
        let seq = longest_pmi_exact(&dl_matrix(&g, &l).unwrap(), 15).unwrap();
        let r = augment_distance_randomized(&g, &l, &seq, 9).unwrap();
        assert!(r.added.is_empty());
        assert_eq!(r.bound_value, seq.len());
    }

    #[test]
    fn rejects_foreign_sequence() {
        let g = DiGraph::from_edges(3, [(1, 0), (2, 1)]).unwrap();
        let l = LeaderSet::new(vec![0], 3).unwrap();
        let seq = longest_pmi_exact(&dl_matrix(&g, &l).unwrap(), 15).unwrap();
        let other = DiGraph::from_edges(3, [(2, 0), (1, 0)]).unwrap();
        assert!(augment_distance_randomized(&other, &l, &seq, 1).is_err());
        assert!(augment_distance_best_of(&g, &l, &seq, 1, 0).is_err());
    }

    #[test]
    fn chain_keeps_every_distance() {
        let g = DiGraph::from_edges(4, [(1, 0), (2, 1), (3, 2)]).unwrap();
        let l = LeaderSet::new(vec![0], 4).unwrap();
        let seq = longest_pmi_exact(&dl_matrix(&g, &l).unwrap(), 15).unwrap();
        assert_eq!(seq.len(), 4);
        let r = augment_distance_best_of(&g, &l, &seq, 5, 4).unwrap();
        assert!(respects_windows(&r.graph, &l, &seq).unwrap());
        // d(v_i, 0) must stay exactly i: only edges that skip no level fit.
        assert_eq!(r.graph.edge_count(), 3 + 6);
    }
}
