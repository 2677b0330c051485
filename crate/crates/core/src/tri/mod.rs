//! Four-type trees, their labelings and the bijection to rooted pointed
//! triangulations, with the scaling constants of the critical sampler.

mod bijection;
mod constants;
mod enumerate;
mod exact;
mod halfdist;
mod ttree;

pub use bijection::{
    root_class, ttree_to_triangulation, verify_tri_cactus, verify_tri_distance_formula, CactusViolation, ErasedVertex,
    RootClass, Triangulation,
};
pub use constants::{
    bipartite_closed_forms, bipartite_moments, c_q, perron_vector, tri_moments, verify_tri_constants,
    BipartiteConstants, ClosedForms, MultitypeMoments, Scaling, TriConstants,
};
pub use enumerate::{brute_force_tlabel_count, enumerate_labeled_ttrees, for_each_tlabeling, ttree_shapes};
pub use exact::{sample_uniform_ttree, sample_uniform_ttree_exact, TTREE_GW_MAX_N};
pub use halfdist::HalfDistance;
pub use ttree::{
    sample_admissible_tlabels, sample_conditioned_ttree, Conditioned, GwParams, LabeledTTree, RootType,
    TSamplerOptions, TTree, TType,
};
