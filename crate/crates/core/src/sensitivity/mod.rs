//! Quasi-Monte-Carlo sensitivity of identified parameters to smooth
//! measurement noise, measured in the mechanics-based metric.

mod cloud;
mod metric;
mod noise;
mod refit;
mod sobol;
mod sobol_table;

pub use cloud::{
    cloud_from_linearization, cloud_size, correlation_matrix, exact_distances, max_off_diagonal, run_sensitivity,
    Linearization, ParameterCloud, SensitivityOptions,
};
pub use metric::{
    check_metric_range, linearized_distance, max_odqvist, mechanics_distance, strain_sensitivity, MetricProgramConfig,
};
pub use noise::{synthesize_noise, NoiseModel};
pub use refit::{fast_refit, fast_refit_normal_equations, FastRefit};
pub use sobol::{box_muller, sobol_normals, Sobol, SobolConfig, UNIFORM_CLAMP};

use thiserror::Error;

use crate::identify::IdentifyError;
use crate::simulator::SimulationError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SensitivityError {
    #[error("invalid sensitivity configuration: {0}")]
    InvalidConfig(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("Jacobian is rank deficient at column {column} (|R_ii|/max = {ratio:e})")]
    RankDeficient { column: usize, ratio: f64 },
    #[error("normal equations are singular")]
    Singular,
    #[error("parameter {0} has no influence on the data (zero Jacobian column)")]
    ZeroColumn(usize),
    #[error(transparent)]
    Identify(#[from] IdentifyError),
    #[error(transparent)]
    Simulation(#[from] SimulationError),
}
