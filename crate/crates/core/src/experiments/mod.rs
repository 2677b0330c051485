//! Monte Carlo experiments, their statistics and report files.

mod config;
mod record;
mod runs;
mod sampling;
mod stats;
mod verify;

pub use config::{ExperimentConfig, ExperimentKind};
pub use record::{
    emit_report, read_report_json, records_to_csv, Check, ExperimentRecord, PlotSeries, StatRow, CSV_HEADER,
};
pub use runs::{
    distance_scale, log_grid, root_to_pointed, run_ball_volume, run_dmgb_sweep, run_experiment, run_geodesic_stats,
    run_two_point, run_universality,
};
pub use sampling::{sample_q_angulation, sample_tree, triangulation_size, SampledMap, TreeSample};
pub use stats::{
    chi_square, fit_line, kolmogorov_p, ks_two_sample, moments, quantile, sorted, ChiSquare, KsResult, LineFit, Moments,
};
pub use verify::run_verify;
