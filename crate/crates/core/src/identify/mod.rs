//! Error functional, nested Nelder-Mead identification, finite-difference
//! Jacobians and Levenberg-Marquardt refinement.

mod jacobian;
mod layout;
mod nelder_mead;
mod nested;
mod pipeline;
mod problem;
mod refine;
mod weighting;

pub use jacobian::{jacobian_fd, JacobianOptions};
pub use layout::{ParameterLayout, ParameterVector, Slot, Transform};
pub use nelder_mead::{nelder_mead, NelderMeadOptions, NelderMeadResult};
pub use nested::{nested_identify, NestedOptions, NestedOutcome};
pub use pipeline::{identify, IdentifyOptions, IdentifyOutcome};
pub use problem::{error_functional, model_response, IdentificationProblem, TestCase};
pub use refine::{gauss_newton_refine, gauss_newton_step, scaled_gradient, RefineOptions, RefineOutcome, RefineStop};
pub use weighting::Weighting;

use thiserror::Error;

use crate::simulator::SimulationError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IdentifyError {
    #[error("parameter layout: {0}")]
    Layout(String),
    #[error("`{0}` is not an identified parameter of this layout")]
    FixedSlot(String),
    #[error("inadmissible parameters {params:?}: {reason}")]
    Inadmissible { params: Vec<f64>, reason: String },
    #[error("simulation failed for parameters {params:?}: {source}")]
    Simulation { params: Vec<f64>, source: SimulationError },
    #[error("invalid identification problem: {0}")]
    InvalidProblem(String),
    #[error("objective is not finite at the starting point")]
    NonFiniteStart,
    #[error("Jacobian is rank deficient at column {column} (|R_ii|/max = {ratio:e})")]
    RankDeficient { column: usize, ratio: f64 },
    #[error("refinement stalled: {0}")]
    Stalled(String),
}

/// A weighted nonlinear least-squares problem `Φ(p) = (Exp − Mod(p))·W·(Exp − Mod(p))`.
pub trait LeastSquaresModel: Sync {
    fn n_params(&self) -> usize;

    /// Experimental vector `Exp`.
    fn observed(&self) -> &[f64];

    /// Model prediction `Mod(p)` in natural coordinates.
    fn predict(&self, p: &[f64]) -> Result<Vec<f64>, IdentifyError>;

    fn weighting(&self) -> &Weighting;

    /// Optimiser coordinates per parameter.
    fn transforms(&self) -> Vec<Transform> {
        vec![Transform::Linear; self.n_params()]
    }

    /// Membership of each parameter in the inner (conservative) group of the
    /// nested identification.
    fn conservative_mask(&self) -> Vec<bool> {
        vec![true; self.n_params()]
    }

    /// Residual `Exp − Mod(p)`.
    fn residual(&self, p: &[f64]) -> Result<Vec<f64>, IdentifyError> {
        let m = self.predict(p)?;
        if m.len() != self.observed().len() {
            return Err(IdentifyError::InvalidProblem(format!(
                "model returned {} values for {} observations",
                m.len(),
                self.observed().len()
            )));
        }
        Ok(self.observed().iter().zip(&m).map(|(e, m)| e - m).collect())
    }

    fn objective(&self, p: &[f64]) -> Result<f64, IdentifyError> {
        Ok(self.weighting().quadratic_form(&self.residual(p)?))
    }

    /// `Exp·W·Exp`, the scale of the gradient tolerance.
    fn data_scale(&self) -> f64 {
        self.weighting().quadratic_form(self.observed())
    }
}
