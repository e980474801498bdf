//! Sum-of-local-effects (SOLE) data structures.
//!
//! Facilities with a weight and an effect radius are placed on the vertices
//! of an edge-weighted graph. A facility of radius `d'` on `u` reaches a query
//! circle of radius `d` around `v` exactly when `dist(u, v) <= d + d'`. The
//! structures here answer the semigroup sum of all reaching weights, or the
//! `k` heaviest reaching facilities, in time polylogarithmic in the number of
//! vertices and facilities:
//!
//! * [`TreeSole`] for trees, built on a centroid decomposition;
//! * [`GraphSole`] for graphs with a t-separator decomposition, built on a
//!   centroid decomposition of the decomposition tree and multi-dimensional
//!   range-sum priority search trees;
//! * [`NaiveSole`], a brute-force reference used to check both.

use std::fmt;

pub mod bench;
pub mod decomp;
pub mod error;
pub mod gen;
pub mod graph;
pub mod graph_sole;
pub mod metrics;
pub mod multidim;
pub mod oracle;
pub mod rangekit;
mod registry;
pub mod select;
pub mod semigroup;
pub mod tree_sole;

pub use error::{Error, Result};
pub use graph::{Dist, Graph};
pub use graph_sole::GraphSole;
pub use multidim::ComplementStrategy;
pub use oracle::NaiveSole;
pub use semigroup::Semigroup;
pub use tree_sole::TreeSole;

/// Opaque facility identifier. Ties between equal weights go to the
/// smaller id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FacilityId(pub u64);

impl fmt::Display for FacilityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// The four SOLE operations. Vertices are graph indices; `d` is the
/// facility's effect radius for `add` and the query radius otherwise, and
/// must be non-negative.
pub trait Sole<W> {
    fn add(&mut self, v: usize, f: FacilityId, w: W, d: Dist) -> Result<()>;
    fn remove(&mut self, v: usize, f: FacilityId) -> Result<()>;
    /// Sum of the weights of facilities reaching the radius-`d` circle
    /// around `v`, or `None` when there are none.
    fn sum(&self, v: usize, d: Dist) -> Result<Option<W>>;
    /// The `k` heaviest reaching facilities, heaviest first, ties to the
    /// smaller id.
    fn top(&self, v: usize, k: usize, d: Dist) -> Result<Vec<(FacilityId, W)>>;
}
