use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::constitutive::{HardeningRule, MaterialParams, ModelFamily, ModelKind};
use crate::identify::IdentifyOptions;
use crate::sensitivity::{MetricProgramConfig, NoiseModel, SensitivityOptions, SobolConfig};
use crate::simulator::{make_experiment_program, ExperimentProgramConfig, LoadingProgram, SolverOptions};

use super::diagnostics::DiagnosticThresholds;
use super::WorkbenchError;

/// Starting value of the Voce saturation rate when no initial guess is given.
const VOCE_P2_START: f64 = 100.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HardeningChoice {
    New,
    Voce,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub family: ModelFamily,
    pub n_branches: usize,
    pub hardening: HardeningChoice,
}

impl Default for ModelSpec {
    fn default() -> Self {
        ModelSpec { family: ModelFamily::ArmstrongFrederick, n_branches: 2, hardening: HardeningChoice::New }
    }
}

impl ModelSpec {
    pub fn kind(&self) -> Result<ModelKind, WorkbenchError> {
        Ok(ModelKind::new(self.family, self.n_branches)?)
    }

    pub fn with_branches(&self, n_branches: usize) -> Self {
        ModelSpec { n_branches, ..*self }
    }

    /// Short label such as `AF-3` or `AF-3-voce`.
    pub fn label(&self) -> String {
        match self.hardening {
            HardeningChoice::New => format!("{}-{}", self.family, self.n_branches),
            HardeningChoice::Voce => format!("{}-{}-voce", self.family, self.n_branches),
        }
    }

    /// The VT6 constants of this family and size, with the Voce rule started
    /// from the new rule's initial slope when requested.
    pub fn preset(&self) -> Result<MaterialParams, WorkbenchError> {
        let mut p = MaterialParams::vt6(self.kind()?)?;
        if self.hardening == HardeningChoice::Voce {
            let p1 = match p.hardening {
                HardeningRule::NewRule { gamma, .. } => gamma,
                HardeningRule::Voce { p1, .. } => p1,
            };
            p.hardening = HardeningRule::Voce { p1, p2: VOCE_P2_START };
        }
        Ok(p)
    }
}

/// One ratcheting test of the four-stage program.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestSpec {
    pub sigma_m: f64,
    pub sigma_a_max: f64,
    pub n_cycles: usize,
}

impl TestSpec {
    pub fn program(&self, cfg: &ExperimentProgramConfig) -> Result<LoadingProgram, WorkbenchError> {
        Ok(make_experiment_program(self.sigma_m, self.sigma_a_max, self.n_cycles, cfg)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentsConfig {
    pub program: ExperimentProgramConfig,
    pub calibration: Vec<TestSpec>,
    /// Tests held out of the calibration.
    pub validation: Vec<TestSpec>,
}

impl Default for ExperimentsConfig {
    fn default() -> Self {
        let t = |sigma_m, sigma_a_max| TestSpec { sigma_m, sigma_a_max, n_cycles: 200 };
        ExperimentsConfig {
            program: ExperimentProgramConfig::default(),
            calibration: vec![t(420.0, 470.0), t(635.0, 255.0)],
            validation: vec![t(530.0, 360.0)],
        }
    }
}

/// How synthetic records are produced when no measured ones are given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticConfig {
    /// Parameter file of the generating model; the preset of `model` if absent.
    pub true_params: Option<PathBuf>,
    /// Sobol' index of the noise draw added to the records; clean if absent.
    pub noise_index: Option<u32>,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig { true_params: None, noise_index: Some(7) }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Paths {
    /// Measured calibration records (CSV with sidecar JSON).
    pub calibration_records: Vec<PathBuf>,
    pub validation_records: Vec<PathBuf>,
    /// Initial guess; the preset of the model if absent.
    pub initial_params: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
}

/// Model sizes compared by the diagnostics and the thresholds applied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DiagnoseConfig {
    pub branch_counts: Vec<usize>,
    pub thresholds: DiagnosticThresholds,
    /// Draws re-simulated in full to audit the linearised distances.
    pub exact_metric_draws: usize,
}

impl Default for DiagnoseConfig {
    fn default() -> Self {
        DiagnoseConfig { branch_counts: vec![2, 3, 4], thresholds: DiagnosticThresholds::default(), exact_metric_draws: 0 }
    }
}

/// Everything a batch run needs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub solver: SolverOptions,
    pub identify: IdentifyOptions,
    pub sensitivity: SensitivityOptions,
    pub noise: NoiseModel,
    pub sobol: SobolConfig,
    pub metric: MetricProgramConfig,
    pub experiments: ExperimentsConfig,
    pub synthetic: SyntheticConfig,
    pub diagnose: DiagnoseConfig,
    pub paths: Paths,
}

impl RunConfig {
    /// Reads a JSON configuration; relative paths inside it are resolved
    /// against the file's directory.
    pub fn load(path: &Path) -> Result<Self, WorkbenchError> {
        let mut cfg: RunConfig = super::read_json(path)?;
        if let Some(dir) = path.parent() {
            cfg.resolve_paths(dir);
        }
        Ok(cfg)
    }

    fn resolve_paths(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        self.paths.calibration_records.iter_mut().for_each(fix);
        self.paths.validation_records.iter_mut().for_each(fix);
        self.paths.initial_params.iter_mut().for_each(fix);
        self.paths.output_dir.iter_mut().for_each(fix);
        self.synthetic.true_params.iter_mut().for_each(fix);
    }

    /// Checks option ranges and that every referenced input file exists.
    pub fn validate(&self) -> Result<(), WorkbenchError> {
        let bad = |m: String| Err(WorkbenchError::Config(m));
        let config = |e: &dyn std::fmt::Display| WorkbenchError::Config(e.to_string());
        self.model.kind().map_err(|e| config(&e))?;
        for n in &self.diagnose.branch_counts {
            self.model.with_branches(*n).kind().map_err(|e| config(&e))?;
        }
        self.solver.validate().map_err(|e| config(&e))?;
        self.noise.validate().map_err(|e| config(&e))?;
        self.sobol.validate().map_err(|e| config(&e))?;
        let id = &self.identify;
        let positive = [
            ("identify.refine.grad_tol", id.refine.grad_tol),
            ("identify.refine.max_step", id.refine.max_step),
            ("identify.nested.inner.xtol", id.nested.inner.xtol),
            ("identify.nested.outer.xtol", id.nested.outer.xtol),
            ("identify.nested.relative_step", id.nested.relative_step),
            ("sensitivity.jacobian.rel_step", self.sensitivity.jacobian.rel_step),
            ("sensitivity.jacobian.floor", self.sensitivity.jacobian.floor),
            ("metric.sigma_max", self.metric.sigma_max),
            ("metric.period", self.metric.period),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if !(id.nested.box_factor > 1.0) {
            return bad(format!("identify.nested.box_factor must exceed 1, got {}", id.nested.box_factor));
        }
        if self.metric.n_cycles == 0 {
            return bad("metric.n_cycles must be positive".into());
        }
        let n_tests = if self.paths.calibration_records.is_empty() {
            self.experiments.calibration.len()
        } else {
            self.paths.calibration_records.len()
        };
        if n_tests == 0 {
            return bad("no calibration tests configured".into());
        }
        if self.sobol.dimensions != self.noise.n_modes * n_tests {
            return bad(format!(
                "sobol.dimensions is {} but {} noise modes × {n_tests} tests need {}",
                self.sobol.dimensions,
                self.noise.n_modes,
                self.noise.n_modes * n_tests
            ));
        }
        for spec in self.experiments.calibration.iter().chain(&self.experiments.validation) {
            spec.program(&self.experiments.program).map_err(|e| config(&e))?;
        }
        let files = self
            .paths
            .calibration_records
            .iter()
            .chain(&self.paths.validation_records)
            .chain(&self.paths.initial_params)
            .chain(&self.synthetic.true_params);
        for f in files {
            if !f.is_file() {
                return bad(format!("input file {} does not exist", f.display()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn missing_file_is_rejected() {
        let mut cfg = RunConfig::default();
        cfg.paths.initial_params = Some("/nonexistent/p0.json".into());
        assert!(matches!(cfg.validate(), Err(WorkbenchError::Config(_))));
    }

    #[test]
    fn mismatched_sobol_dimensions_are_rejected() {
        let mut cfg = RunConfig::default();
        cfg.experiments.calibration.pop();
        assert!(cfg.validate().is_err());
        cfg.sobol.dimensions = 20;
        cfg.validate().unwrap();
    }

    #[test]
    fn non_positive_tolerance_is_rejected() {
        let mut cfg = RunConfig::default();
        cfg.identify.refine.grad_tol = 0.0;
        assert!(matches!(cfg.validate(), Err(WorkbenchError::Config(_))));
        let mut cfg = RunConfig::default();
        cfg.diagnose.branch_counts = vec![2, 9];
        assert!(matches!(cfg.validate(), Err(WorkbenchError::Config(_))));
    }

    #[test]
    fn partial_json_fills_defaults() {
        let cfg: RunConfig = serde_json::from_str(r#"{"model": {"family": "OW2", "n_branches": 3, "hardening": "voce"}}"#).unwrap();
        assert_eq!(cfg.model.label(), "OW2-3-voce");
        assert_eq!(cfg.solver, SolverOptions::default());
        assert!(matches!(cfg.model.preset().unwrap().hardening, HardeningRule::Voce { .. }));
    }
}
