//! Stress-controlled uniaxial integration of the constitutive models,
//! loading programs, per-cycle extrema and the coupled temperature field.

mod integrate;
mod local;
mod program;
mod record;
mod thermal;

pub use integrate::integrate;
pub use program::{
    make_experiment_program, make_metric_program, CycleMarks, ExperimentProgramConfig, LoadingProgram, ProgramGrid,
    Segment, StageDurations,
};
pub use record::{extract_extrema, CycleExtrema, ExperimentRecord, RecordMeta};
pub use thermal::{heat_capacity, temperature_step};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constitutive::{ConstitutiveError, MaterialState};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulationError {
    #[error("invalid loading program: {0}")]
    InvalidProgram(String),
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
    #[error(transparent)]
    Constitutive(#[from] ConstitutiveError),
    #[error("prescribed stress {stress} MPa at t = {time} s exceeds the limit load of the material")]
    LimitLoad { time: f64, stress: f64 },
    #[error("local update failed at t = {time} s after {depth} substep halvings: {reason}")]
    LocalSolveFailed { time: f64, depth: u32, reason: String },
    #[error("yield radius K + R = {radius} MPa collapsed at t = {time} s")]
    YieldRadiusCollapsed { time: f64, radius: f64 },
    #[error("thermal update failed: {0}")]
    Thermal(String),
    #[error("trace does not match program: {0}")]
    TraceMismatch(String),
}

/// Integration settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Nodes per load cycle; a multiple of 4 so every turning point is a node.
    pub steps_per_cycle: usize,
    /// Largest stress increment on ramps, MPa.
    pub max_stress_increment: f64,
    /// Largest time step on ramps and holds, s.
    pub max_time_step: f64,
    /// Tolerance on the recovered stress, MPa.
    pub stress_tol: f64,
    /// Number of times a failing step may be halved.
    pub max_substep_depth: u32,
    /// Keep a full state snapshot every this many nodes (0: none).
    pub snapshot_stride: usize,
    /// Integrate the temperature equation; otherwise θ stays at θ₀.
    pub thermal: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            steps_per_cycle: 40,
            max_stress_increment: 5.0,
            max_time_step: 1.0,
            stress_tol: 1e-6,
            max_substep_depth: 12,
            snapshot_stride: 0,
            thermal: true,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<(), SimulationError> {
        let bad = |m: String| Err(SimulationError::InvalidOptions(m));
        if self.steps_per_cycle < 4 || self.steps_per_cycle % 4 != 0 {
            return bad(format!("steps_per_cycle must be a positive multiple of 4, got {}", self.steps_per_cycle));
        }
        if !(self.max_stress_increment > 0.0) || !(self.max_time_step > 0.0) {
            return bad("step limits must be positive".into());
        }
        if !(self.stress_tol > 0.0) {
            return bad("stress_tol must be positive".into());
        }
        Ok(())
    }
}

/// Result of integrating one program.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationTrace {
    pub times: Vec<f64>,
    /// Prescribed σ₁₁, MPa.
    pub stress: Vec<f64>,
    /// ε₁₁.
    pub strain: Vec<f64>,
    /// θ, K.
    pub theta: Vec<f64>,
    /// Cumulative dissipation per unit mass, J/kg.
    pub dissipation: Vec<f64>,
    /// Mean dissipation rate over the step ending at each node, W/kg.
    pub dissipation_rate: Vec<f64>,
    /// Accumulated plastic arc-length s at each node.
    pub s: Vec<f64>,
    /// `(node, state)` pairs at the configured stride.
    pub snapshots: Vec<(usize, MaterialState)>,
    pub final_state: MaterialState,
    /// Largest deviation of the recovered stress tensor from the prescribed one, MPa.
    pub max_stress_error: f64,
    /// Smallest normalised `σ_eff : Δε_i` over all plastic steps, in [−1, 1].
    pub min_plastic_cosine: f64,
    /// Smallest normalised `X_l : Δε_li` over all branches and steps, in [−1, 1].
    pub min_branch_cosine: f64,
    /// Number of steps that needed substepping.
    pub substepped: usize,
    pub options: SolverOptions,
}

impl SimulationTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Writes `time,stress,strain,theta,dissipation` rows.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["time_s", "stress_MPa", "strain", "theta_K", "dissipation_J_per_kg"])?;
        for i in 0..self.len() {
            wr.serialize((self.times[i], self.stress[i], self.strain[i], self.theta[i], self.dissipation[i]))?;
        }
        wr.flush()?;
        Ok(())
    }
}
