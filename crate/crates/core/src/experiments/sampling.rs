//! Uniform q-angulations with a given number of faces, shared by the
//! experiments and the command line.

use rand::Rng;

use crate::error::{Error, Result};
use crate::maps::{bdg_forward, PlanarMap};
use crate::trees::{sample_labeled_ptree, LabeledPTree};
use crate::tri::{
    sample_admissible_tlabels, sample_uniform_ttree, ttree_to_triangulation, LabeledTTree, RootType, TType,
};

/// The labeled tree behind a map, drawn before any map is built so that
/// label-only statistics and full map checks share one random stream.
#[derive(Clone, Debug)]
pub enum TreeSample {
    Bipartite { theta: LabeledPTree, eps: u8 },
    Triangulation { theta: LabeledTTree },
}

/// A rooted pointed map with the labels of its vertices.
#[derive(Clone, Debug)]
pub struct SampledMap {
    pub map: PlanarMap,
    /// Label of every vertex; ∂ carries `min_label − 1`.
    pub vertex_label: Vec<i32>,
    pub min_label: i32,
    /// Map vertex of the tree root.
    pub root_vertex: u32,
}

/// Vertices of the triangulation with `faces` faces.
pub fn triangulation_size(faces: usize) -> Result<usize> {
    if faces < 2 || !faces.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("a triangulation has an even number ≥ 2 of faces, not {faces}")));
    }
    Ok(faces / 2 + 2)
}

/// Draws the tree for a uniform q-angulation with `faces` faces: positive
/// triangulations for `q = 3`, 2p-angulations with a uniform root sign for
/// even `q`.
pub fn sample_tree<R: Rng + ?Sized>(q: u32, faces: usize, rng: &mut R) -> Result<TreeSample> {
    if q == 3 {
        let shape = sample_uniform_ttree(triangulation_size(faces)?, RootType::One, rng)?;
        Ok(TreeSample::Triangulation { theta: sample_admissible_tlabels(shape, rng) })
    } else if q >= 4 && q.is_multiple_of(2) {
        let theta = sample_labeled_ptree(q as usize / 2, faces, rng)?;
        let eps = rng.gen_range(0..2u8);
        Ok(TreeSample::Bipartite { theta, eps })
    } else {
        Err(Error::InvalidParameter(format!("q = {q} must be 3 or even")))
    }
}

impl TreeSample {
    /// Labels of the map vertices other than ∂, tree root first.
    pub fn vertex_labels(&self) -> Vec<i32> {
        match self {
            TreeSample::Bipartite { theta, .. } => {
                (0..theta.tree().len()).filter(|&v| theta.is_white(v)).map(|v| theta.label(v)).collect()
            }
            TreeSample::Triangulation { theta } => {
                (0..theta.tree().len()).filter(|&v| theta.ttype(v) == TType::One).map(|v| theta.label(v)).collect()
            }
        }
    }

    pub fn build(&self) -> Result<SampledMap> {
        match self {
            TreeSample::Bipartite { theta, eps } => {
                let b = bdg_forward(theta, *eps)?;
                Ok(SampledMap {
                    root_vertex: b.map_vertex[0],
                    vertex_label: b.vertex_label,
                    min_label: b.min_label,
                    map: b.map,
                })
            }
            TreeSample::Triangulation { theta } => {
                let t = ttree_to_triangulation(theta)?;
                Ok(SampledMap {
                    root_vertex: t.map_vertex[0],
                    vertex_label: t.vertex_label,
                    min_label: t.min_label,
                    map: t.map,
                })
            }
        }
    }
}

/// Uniform rooted pointed q-angulation with `faces` faces.
pub fn sample_q_angulation<R: Rng + ?Sized>(q: u32, faces: usize, rng: &mut R) -> Result<SampledMap> {
    sample_tree(q, faces, rng)?.build()
}
