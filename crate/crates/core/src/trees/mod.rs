//! Plane trees, labeled p-trees and their contour codings.

mod branching;
mod contour;
mod enumerate;
mod plane;
mod ptree;

pub use branching::{branching_subtrees, BranchSubtree, Side};
pub use contour::{contour_and_labels, decode_contour, read_contour, write_contour, ContourCoding};
pub use enumerate::{
    coding_key, enumerate_labeled_ptrees, for_each_labeled_ptree, labeled_ptree_count, ptree_shapes,
    DEFAULT_ENUMERATION_CAP,
};
pub use plane::{Children, PlaneTree};
pub use ptree::{
    check_ptree, increment_vectors, sample_admissible_labels, sample_increment_vector, sample_labeled_ptree,
    sample_uniform_ptree, sample_uniform_ptree_exact, sample_uniform_ptree_gw, LabeledPTree, GW_REJECTION_MAX_N,
};
