//! Strong structural controllability bounds for leader-follower networks on
//! directed graphs, and edge augmentation that preserves them.
//!
//! Two graph-theoretic lower bounds on the dimension of the strong structurally
//! controllable subspace are provided:
//!
//! * the zero-forcing bound, the size of the derived set of the leaders
//!   ([`zero_forcing`]);
//! * the distance bound, the length of the longest pseudo-monotonically
//!   increasing (PMI) sequence of distance-to-leader vectors ([`pmi`]).
//!
//! For each bound there is an augmentation routine that adds as many edges as
//! possible while the bound survives ([`zero_forcing::augment_zf`],
//! [`augment::augment_distance_best_of`]), plus distance-preserving
//! augmentation for a single node pair ([`augment::dpea`]). The [`oracle`]
//! module checks both bounds against the numerical rank of the Krylov
//! controllability matrix for sampled positive edge weights.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
// Node ids double as matrix indices throughout.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod augment;
mod error;
pub mod graph;
pub mod oracle;
pub mod pmi;
pub mod rng;
pub mod zero_forcing;

pub use augment::{AugmentResult, BoundKind, LevelPartition};
pub use error::{Error, Result};
pub use graph::{DiGraph, Dist, Edge, NodeId};
pub use pmi::{DlMatrix, PmiSequence};
pub use zero_forcing::{LeaderSet, ZfResult};
