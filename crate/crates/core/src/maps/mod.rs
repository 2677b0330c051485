//! Half-edge planar maps, the labeled-tree bijection for 2p-angulations,
//! graph distances and label identities.

pub(crate) mod arcs;
mod bdg;
mod bfs;
mod canon;
mod export;
mod planar;

pub(crate) use bdg::check_label_distances;
pub use bdg::{
    bdg_forward, cactus_bound, reroot_uniform, simple_geodesic, successors, verify_distance_formula, BdgMap,
    CactusOracle, GeodesicPath, LabelDistanceViolation, Reroot, NO_SUCCESSOR,
};
pub use bfs::{bfs_distances, bfs_into, is_consistent, DistanceField, UNREACHED};
pub use canon::{canonical_code, canonical_hash, isomorphic};
pub use export::{read_edge_list, read_map_binary, write_edge_list, write_map_binary, EdgeList, StoredMap, MAP_MAGIC};
pub use planar::{Face, PlanarMap, VertexOrigin};
