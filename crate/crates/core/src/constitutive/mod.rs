//! Parameters, internal state and evolution equations of the Armstrong-Frederick
//! and Ohno-Wang (I and II) kinematic hardening models with isotropic
//! hardening, Perzyna viscosity and a thermal coupling.
//!
//! Stresses and stiffnesses are in MPa, strains are dimensionless. Energies
//! per unit mass are returned in J/kg; [`MPA`] converts stress to Pa.

mod params;
mod rates;

pub use params::{
    ElasticThermalParams, HardeningRule, Kinematic, MaterialParams, MicroYield, ModelFamily,
    ModelKind, Viscosity,
};
pub use rates::{
    backstress, backstress_rate_af_stress_form, backstress_rate_ow2_stress_form, branch_rate_af,
    branch_rate_ow1, branch_rate_ow2, dissipation_rate, effective_stress, flow_direction,
    free_energy_and_entropy, hooke_stress, isotropic_hardening, overstress_and_rate,
    DissipationTerms,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tensors::SymTensor;

/// Pa per MPa.
pub const MPA: f64 = 1e6;

/// Reference overstress of the Perzyna law, MPa.
pub const PERZYNA_F0: f64 = 1.0;

/// `√(2/3)`.
pub const SQRT_2_3: f64 = 0.816_496_580_927_726;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstitutiveError {
    #[error("invalid material parameters: {0}")]
    InvalidParams(String),
    #[error("flow direction undefined for a zero effective stress deviator")]
    DegenerateDirection,
    #[error("backstress of branch {branch} outside its micro-yield surface: |X| = {norm}, limit {limit}")]
    InadmissibleBackstress { branch: usize, norm: f64, limit: f64 },
    #[error("non-positive temperature {0} K")]
    NonPositiveTemperature(f64),
}

/// Internal variables at one instant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaterialState {
    /// Inelastic strain ε_i.
    pub eps_i: SymTensor,
    /// Dissipative strain ε_li of each branch.
    pub eps_li: Vec<SymTensor>,
    /// Accumulated plastic arc-length (Odqvist parameter).
    pub s: f64,
    /// Accumulated arc-length of the total strain deviator.
    pub s_eps: f64,
    /// Temperature, K.
    pub theta: f64,
}

impl MaterialState {
    /// Virgin isotropic state: all strains zero, θ = θ₀.
    pub fn initial(n_branches: usize, theta0: f64) -> Self {
        MaterialState {
            eps_i: SymTensor::ZERO,
            eps_li: vec![SymTensor::ZERO; n_branches],
            s: 0.0,
            s_eps: 0.0,
            theta: theta0,
        }
    }

    pub fn backstresses(&self, c: &[f64]) -> Vec<SymTensor> {
        self.eps_li
            .iter()
            .zip(c)
            .map(|(eps_li, c_l)| backstress(&self.eps_i, eps_li, *c_l))
            .collect()
    }
}
