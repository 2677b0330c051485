//! Grid discretization of the Brownian excursion, its Gaussian labels and
//! the label pseudo-distances built from them.

mod excursion;
mod io;
mod metric;
mod snake;

pub use excursion::{sample_excursion, sample_tree_excursion};
pub use io::{read_metric_binary, read_snake_csv, write_metric_binary, write_snake_csv, METRIC_MAGIC};
pub use metric::{
    check_metric_identities, dcirc_matrix, dstar_brute_force, dstar_grid, metric_sample, path_dcirc_length,
    simple_geodesic_continuum, CornerContour, FastDstar, MetricSample, METRIC_TOLERANCE,
};
pub use snake::{
    dcirc, excursion_tree, label_covariance_factor, sample_labels, sample_labels_dense, sample_labels_tree,
    sample_snake, CircularLabelDistance, SnakeGrid, DENSE_MAX_M,
};
