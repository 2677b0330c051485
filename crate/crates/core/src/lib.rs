//! Uniform random planar maps through labeled tree bijections.

pub mod continuum;
pub mod dmgb;
pub mod error;
pub mod experiments;
pub mod maps;
pub mod rmq;
pub mod rng;
pub mod trees;
pub mod tri;

pub use error::{Error, Result};
