//! Identification of cyclic plasticity models from uniaxial ratcheting tests,
//! with Monte-Carlo sensitivity analysis of the identified parameters.

pub mod constitutive;
pub mod identify;
pub mod numerics;
pub mod sensitivity;
pub mod simulator;
pub mod tensors;
pub mod workbench;

pub use constitutive::{HardeningRule, Kinematic, MaterialParams, MaterialState, MicroYield, ModelFamily, ModelKind};
pub use simulator::{integrate, ExperimentRecord, LoadingProgram, SimulationTrace, SolverOptions};
pub use tensors::SymTensor;
