//! Distance-to-leader (DL) vectors and pseudo-monotonically increasing (PMI)
//! sequences.
//!
//! A sequence of DL vectors is PMI when every vector `D_i` has a coordinate
//! `w = π(i)` with `D_i[w] < D_j[w]` for all later `D_j`. The length of the
//! longest PMI sequence of vectors with at least one finite entry lower-bounds
//! the dimension of the strong structurally controllable subspace.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, Dist, NodeId};
use crate::zero_forcing::LeaderSet;

/// Default cap on candidate vectors for [`longest_pmi_exact`].
pub const DEFAULT_EXACT_LIMIT: usize = 15;

/// Row `i` holds `d(v_i, l_j)` for every leader `l_j`, in leader order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DlMatrix {
    m: usize,
    rows: Vec<Vec<Dist>>,
}

impl DlMatrix {
    /// Wraps precomputed rows; all rows must share one non-zero length.
    pub fn from_rows(rows: Vec<Vec<Dist>>) -> Result<Self> {
        let m = check_lengths(&rows)?;
        Ok(DlMatrix { m, rows })
    }

    pub fn leader_count(&self) -> usize {
        self.m
    }

    pub fn node_count(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, v: NodeId) -> &[Dist] {
        &self.rows[v]
    }

    pub fn rows(&self) -> &[Vec<Dist>] {
        &self.rows
    }

    /// Nodes whose row has at least one finite entry, ascending.
    pub fn candidates(&self) -> Vec<NodeId> {
        (0..self.rows.len())
            .filter(|&v| self.rows[v].iter().any(|d| d.is_finite()))
            .collect()
    }
}

/// One BFS per leader over reversed edges.
pub fn dl_matrix(g: &DiGraph, leaders: &LeaderSet) -> Result<DlMatrix> {
    leaders.check_for(g)?;
    let n = g.node_count();
    let columns = leaders
        .iter()
        .map(|l| g.bfs_distances_to(l))
        .collect::<Result<Vec<_>>>()?;
    let rows = (0..n)
        .map(|v| columns.iter().map(|col| col[v]).collect())
        .collect();
    Ok(DlMatrix {
        m: leaders.len(),
        rows,
    })
}

fn check_lengths(vectors: &[Vec<Dist>]) -> Result<usize> {
    let m = vectors.first().map_or(0, Vec::len);
    if vectors.iter().any(|v| v.len() != m) {
        return Err(Error::invalid("DL vectors have different lengths"));
    }
    if m == 0 && !vectors.is_empty() {
        return Err(Error::invalid(
            "DL vectors must have at least one coordinate",
        ));
    }
    Ok(m)
}

/// Whether `vectors[i]` satisfies the PMI property at coordinate `w`.
fn holds_at(vectors: &[Vec<Dist>], i: usize, w: usize) -> bool {
    let x = vectors[i][w];
    x.is_finite() && vectors[i + 1..].iter().all(|later| x < later[w])
}

/// Canonical witnesses if `vectors` is a PMI sequence.
///
/// Each position gets, among the coordinates that certify it, the one with the
/// smallest value (then the smallest coordinate). The witness value becomes a
/// lower bound for later positions in [`epsilon_star`], so this keeps those
/// bounds low. Witness values are always finite, which rules out all-`Inf`
/// vectors.
pub fn is_pmi(vectors: &[Vec<Dist>]) -> Result<Option<Vec<usize>>> {
    let m = check_lengths(vectors)?;
    let mut witnesses = Vec::with_capacity(vectors.len());
    for i in 0..vectors.len() {
        let best = (0..m)
            .filter(|&w| holds_at(vectors, i, w))
            .min_by_key(|&w| (vectors[i][w], w));
        match best {
            Some(w) => witnesses.push(w),
            None => return Ok(None),
        }
    }
    Ok(Some(witnesses))
}

/// Whether `witnesses` certify `vectors` as PMI.
pub fn verify_witnesses(vectors: &[Vec<Dist>], witnesses: &[usize]) -> bool {
    let Ok(m) = check_lengths(vectors) else {
        return false;
    };
    witnesses.len() == vectors.len()
        && witnesses
            .iter()
            .enumerate()
            .all(|(i, &w)| w < m && holds_at(vectors, i, w))
}

/// Largest strict lower bounds `ε*[i][j]` on each entry that keep the sequence
/// PMI under the given witnesses:
/// `ε*[i][j] = max({ D_k[j] : k < i, π(k) = j } ∪ {-1})`.
///
/// Any entry `D_i[j]` may be lowered to an integer in `(ε*[i][j], D_i[j]]`
/// without breaking the sequence.
pub fn epsilon_star(vectors: &[Vec<Dist>], witnesses: &[usize]) -> Result<Vec<Vec<i64>>> {
    if !verify_witnesses(vectors, witnesses) {
        return Err(Error::NotPmi);
    }
    let m = vectors.first().map_or(0, Vec::len);
    let mut bound = vec![-1i64; m];
    let mut eps = Vec::with_capacity(vectors.len());
    for (v, &w) in vectors.iter().zip(witnesses) {
        eps.push(bound.clone());
        let value = v[w].finite().expect("witness values are finite");
        bound[w] = bound[w].max(i64::from(value));
    }
    Ok(eps)
}

/// A PMI sequence of nodes together with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PmiSequence {
    pub nodes: Vec<NodeId>,
    pub vectors: Vec<Vec<Dist>>,
    /// Zero-based leader coordinate certifying each position.
    pub witnesses: Vec<usize>,
    pub eps_star: Vec<Vec<i64>>,
}

impl PmiSequence {
    /// Builds the sequence of `nodes` with canonical witnesses, or fails with
    /// [`Error::NotPmi`].
    pub fn from_nodes(dl: &DlMatrix, nodes: Vec<NodeId>) -> Result<Self> {
        for &v in &nodes {
            if v >= dl.node_count() {
                return Err(Error::NodeOutOfRange {
                    node: v,
                    n: dl.node_count(),
                });
            }
        }
        let vectors: Vec<Vec<Dist>> = nodes.iter().map(|&v| dl.row(v).to_vec()).collect();
        let witnesses = is_pmi(&vectors)?.ok_or(Error::NotPmi)?;
        let eps_star = epsilon_star(&vectors, &witnesses)?;
        Ok(PmiSequence {
            nodes,
            vectors,
            witnesses,
            eps_star,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The first `len` positions. A prefix of a PMI sequence is PMI and keeps
    /// the same witnesses and `ε*`.
    pub fn prefix(&self, len: usize) -> PmiSequence {
        let len = len.min(self.len());
        PmiSequence {
            nodes: self.nodes[..len].to_vec(),
            vectors: self.vectors[..len].to_vec(),
            witnesses: self.witnesses[..len].to_vec(),
            eps_star: self.eps_star[..len].to_vec(),
        }
    }

    /// Re-certifies the sequence nodes against a (possibly changed) DL matrix.
    pub fn still_pmi_in(&self, dl: &DlMatrix) -> bool {
        let vectors: Vec<Vec<Dist>> = self.nodes.iter().map(|&v| dl.row(v).to_vec()).collect();
        matches!(is_pmi(&vectors), Ok(Some(_)))
    }
}

/// `v` may follow the positions chosen so far.
fn eligible(row: &[Dist], bound: &[i64]) -> bool {
    row.iter()
        .zip(bound)
        .all(|(d, &b)| d.cmp_int(b) == Ordering::Greater)
}

/// Maximum-length PMI sequence by exhaustive search.
///
/// The search state is the vector of per-coordinate strict lower bounds left by
/// the witnesses chosen so far; it alone decides which vectors may come next,
/// so the best completion of each state is memoized. Among equally long
/// optima the lexicographically first `(node, coordinate)` choices win.
pub fn longest_pmi_exact(dl: &DlMatrix, limit: usize) -> Result<PmiSequence> {
    let candidates = dl.candidates();
    if candidates.len() > limit {
        return Err(Error::TooLarge {
            size: candidates.len(),
            limit,
            hint: "use the greedy longest-PMI search",
        });
    }
    let mut search = ExactSearch {
        dl,
        candidates: &candidates,
        memo: BTreeMap::new(),
    };
    let mut bound = vec![-1i64; dl.leader_count()];
    search.best(&bound);

    let mut nodes = Vec::new();
    while let Some(&(_, Some((v, w)))) = search.memo.get(&bound) {
        nodes.push(v);
        bound[w] = i64::from(dl.row(v)[w].finite().expect("finite witness"));
    }
    PmiSequence::from_nodes(dl, nodes)
}

/// Best completion length from a bound vector, and its first `(node, coordinate)`.
type Memo = BTreeMap<Vec<i64>, (usize, Option<(NodeId, usize)>)>;

struct ExactSearch<'a> {
    dl: &'a DlMatrix,
    candidates: &'a [NodeId],
    memo: Memo,
}

impl ExactSearch<'_> {
    fn best(&mut self, bound: &[i64]) -> usize {
        if let Some(&(len, _)) = self.memo.get(bound) {
            return len;
        }
        let mut best = (0, None);
        let open: Vec<NodeId> = self
            .candidates
            .iter()
            .copied()
            .filter(|&v| eligible(self.dl.row(v), bound))
            .collect();
        for &v in &open {
            if best.0 == open.len() {
                break;
            }
            for w in 0..self.dl.leader_count() {
                let Some(value) = self.dl.row(v)[w].finite() else {
                    continue;
                };
                let mut next = bound.to_vec();
                next[w] = i64::from(value);
                let len = 1 + self.best(&next);
                if len > best.0 {
                    best = (len, Some((v, w)));
                }
            }
        }
        self.memo.insert(bound.to_vec(), best);
        best.0
    }
}

/// Greedy PMI sequence: repeatedly appends the eligible `(vector, coordinate)`
/// pair with the smallest finite value, breaking ties by coordinate and then
/// by node id.
pub fn longest_pmi_greedy(dl: &DlMatrix) -> Result<PmiSequence> {
    let mut bound = vec![-1i64; dl.leader_count()];
    let mut open = dl.candidates();
    let mut nodes = Vec::new();
    loop {
        open.retain(|&v| eligible(dl.row(v), &bound));
        let pick = open
            .iter()
            .flat_map(|&v| {
                dl.row(v)
                    .iter()
                    .enumerate()
                    .filter_map(move |(w, d)| d.finite().map(|x| (x, w, v)))
            })
            .min();
        let Some((value, w, v)) = pick else { break };
        nodes.push(v);
        bound[w] = i64::from(value);
    }
    PmiSequence::from_nodes(dl, nodes)
}
