//! Decompositions: degree-3 reduction of trees, centroid trees, and
//! t-separator decompositions with validation and conversions.

mod centroid;
mod convert;
mod degree3;
mod separator;

pub use centroid::{build_centroid_tree, CentroidTree, CtNode};
pub use convert::{
    from_branch_decomposition, from_tree, from_tree_decomposition, BranchDecomposition,
    TreeDecomposition,
};
pub use degree3::{reduce_to_degree3, Degree3Tree};
pub use separator::{
    validate_separator_decomposition, CEdge, SeparatorDecomposition, ValidationReport, Violation,
    MAX_WIDTH,
};
