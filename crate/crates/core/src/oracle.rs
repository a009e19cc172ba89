//! Numerical cross-check of the graph bounds against the rank of the
//! controllability matrix `[B, (-L)B, ..., (-L)^{n-1}B]` for sampled positive
//! edge weights.
//!
//! Both bounds hold for every positive weighting, so any sampled rank below
//! either bound is a bug in the bound computation.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, NodeId};
use crate::rng;
use crate::zero_forcing::LeaderSet;

pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_MAX_NODES: usize = 30;
/// Weights are drawn uniformly from `[WEIGHT_LOW, WEIGHT_LOW + 1)`.
pub const WEIGHT_LOW: f64 = 0.5;

/// Dense weighted Laplacian `L = Deg - A`, row-major.
///
/// `L[u][v] = -w(u, v)` for every edge `(u, v)` and `L[u][u]` is the total
/// weight on the edges leaving `u`, so rows sum to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedLaplacian {
    n: usize,
    data: Vec<f64>,
}

impl WeightedLaplacian {
    /// `weights` follows the lexicographic edge order of `g`; all must be > 0.
    pub fn new(g: &DiGraph, weights: &[f64]) -> Result<Self> {
        if weights.len() != g.edge_count() {
            return Err(Error::invalid("one weight per edge is required"));
        }
        let n = g.node_count();
        let mut data = vec![0.0; n * n];
        for ((u, v), &w) in g.edges().zip(weights) {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::invalid("edge weights must be positive and finite"));
            }
            data[u * n + v] -= w;
            data[u * n + u] += w;
        }
        Ok(WeightedLaplacian { n, data })
    }

    /// Unit weight on every edge.
    pub fn unweighted(g: &DiGraph) -> Self {
        Self::new(g, &vec![1.0; g.edge_count()]).expect("unit weights are valid")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, u: NodeId, v: NodeId) -> f64 {
        self.data[u * self.n + v]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        WeightedLaplacian {
            n: self.n,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    /// `-L x`
    fn apply_negated(&self, x: &[f64]) -> Vec<f64> {
        self.data
            .chunks_exact(self.n)
            .map(|row| -row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .collect()
    }
}

/// Input matrix `B` (`n x m`): column `j` is the unit vector of leader `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputMatrix {
    n: usize,
    leaders: Vec<NodeId>,
}

impl InputMatrix {
    pub fn new(leaders: &LeaderSet, n: usize) -> Result<Self> {
        if let Some(l) = leaders.iter().find(|&l| l >= n) {
            return Err(Error::NodeOutOfRange { node: l, n });
        }
        Ok(InputMatrix {
            n,
            leaders: leaders.as_slice().to_vec(),
        })
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        self.leaders.iter().map(|&l| {
            let mut e = vec![0.0; self.n];
            e[l] = 1.0;
            e
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// Dimension of the Krylov space spanned by `B, (-L)B, (-L)^2 B, ...`.
///
/// Builds an orthonormal basis block by block: each new block is `-L` applied
/// to the directions found in the previous block, orthogonalized twice
/// against the basis. A direction survives if its residual exceeds `tol`
/// times its norm before projection. Stops when a block adds nothing or the
/// basis reaches `n`.
pub fn controllability_dimension(
    laplacian: &WeightedLaplacian,
    input: &InputMatrix,
    tol: f64,
) -> Result<usize> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if laplacian.dim() != input.rows() {
        return Err(Error::invalid("Laplacian and input matrix sizes differ"));
    }
    let n = laplacian.dim();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut block: Vec<Vec<f64>> = input.columns().collect();
    while !block.is_empty() && basis.len() < n {
        let mut fresh = Vec::new();
        for mut w in block {
            let before = norm(&w);
            if before == 0.0 {
                continue;
            }
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(q, &w);
                    w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
                }
            }
            let residual = norm(&w);
            if residual > tol * before {
                w.iter_mut().for_each(|x| *x /= residual);
                basis.push(w.clone());
                fresh.push(w);
                if basis.len() == n {
                    break;
                }
            }
        }
        block = fresh.iter().map(|q| laplacian.apply_negated(q)).collect();
    }
    Ok(basis.len())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateOptions {
    pub tolerance: f64,
    pub max_nodes: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            tolerance: DEFAULT_TOLERANCE,
            max_nodes: DEFAULT_MAX_NODES,
        }
    }
}

/// A sampled weighting whose rank fell below a bound.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Violation {
    pub sample: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RankReport {
    pub sampled_ranks: Vec<usize>,
    pub zf_bound: usize,
    pub pmi_bound: usize,
    pub tolerance: f64,
    pub violations: Vec<Violation>,
}

impl RankReport {
    pub fn is_sound(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Draws `samples` weightings with i.i.d. `U[0.5, 1.5)` edge weights and
/// records every draw whose controllability rank is below `max(zf, pmi)`.
pub fn sample_and_validate(
    g: &DiGraph,
    leaders: &LeaderSet,
    zf_bound: usize,
    pmi_bound: usize,
    samples: usize,
    seed: u64,
    options: ValidateOptions,
) -> Result<RankReport> {
    if samples == 0 {
        return Err(Error::invalid("at least one weight sample is required"));
    }
    let n = g.node_count();
    if n > options.max_nodes {
        return Err(Error::TooLarge {
            size: n,
            limit: options.max_nodes,
            hint: "rank validation is capped for numerical conditioning",
        });
    }
    let input = InputMatrix::new(leaders, n)?;
    let mut rng = rng::stream(seed, 0);
    let floor = zf_bound.max(pmi_bound);
    let mut sampled_ranks = Vec::with_capacity(samples);
    let mut violations = Vec::new();
    for sample in 0..samples {
        let weights: Vec<f64> = (0..g.edge_count())
            .map(|_| WEIGHT_LOW + rng.gen::<f64>())
            .collect();
        let laplacian = WeightedLaplacian::new(g, &weights)?;
        let rank = controllability_dimension(&laplacian, &input, options.tolerance)?;
        if rank < floor {
            violations.push(Violation { sample, rank });
        }
        sampled_ranks.push(rank);
    }
    Ok(RankReport {
        sampled_ranks,
        zf_bound,
        pmi_bound,
        tolerance: options.tolerance,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank(g: &DiGraph, leaders: &[usize]) -> usize {
        let l = LeaderSet::new(leaders.to_vec(), g.node_count()).unwrap();
        let b = InputMatrix::new(&l, g.node_count()).unwrap();
        controllability_dimension(&WeightedLaplacian::unweighted(g), &b, 1e-8).unwrap()
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        let g = DiGraph::from_edges(3, [(0, 1), (0, 2), (2, 1)]).unwrap();
        let lap = WeightedLaplacian::new(&g, &[0.7, 1.2, 0.9]).unwrap();
        assert_eq!(lap.entry(0, 0), 0.7 + 1.2);
        assert_eq!(lap.entry(0, 1), -0.7);
        assert_eq!(lap.entry(1, 0), 0.0);
        for u in 0..3 {
            let s: f64 = (0..3).map(|v| lap.entry(u, v)).sum();
            assert!(s.abs() < 1e-12);
        }
        assert!(WeightedLaplacian::new(&g, &[1.0, -1.0, 1.0]).is_err());
        assert!(WeightedLaplacian::new(&g, &[1.0]).is_err());
    }

    #[test]
    fn all_leaders_full_rank() {
        let g = DiGraph::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(rank(&g, &[0, 1, 2, 3]), 4);
    }

    #[test]
    fn chain_to_leader() {
        let g = DiGraph::from_edges(3, [(1, 0), (2, 1)]).unwrap();
        assert_eq!(rank(&g, &[0]), 3);
    }

    #[test]
    fn disconnected_component_missing() {
        let g = DiGraph::from_edges(4, [(1, 0), (3, 2)]).unwrap();
        assert_eq!(rank(&g, &[0]), 2);
    }

    #[test]
    fn bad_arguments() {
        let g = DiGraph::empty(3);
        let l = LeaderSet::new(vec![0], 3).unwrap();
        let b = InputMatrix::new(&l, 3).unwrap();
        let lap = WeightedLaplacian::unweighted(&g);
        assert!(controllability_dimension(&lap, &b, 0.0).is_err());
        let b4 = InputMatrix::new(&l, 4).unwrap();
        assert!(controllability_dimension(&lap, &b4, 1e-8).is_err());
        let big = DiGraph::empty(31);
        let l31 = LeaderSet::new(vec![0], 31).unwrap();
        assert!(matches!(
            sample_and_validate(&big, &l31, 1, 1, 1, 0, ValidateOptions::default()),
            Err(Error::TooLarge { .. })
        ));
        assert!(sample_and_validate(&g, &l, 1, 1, 0, 0, ValidateOptions::default()).is_err());
    }
}
