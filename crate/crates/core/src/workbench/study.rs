use crate::identify::{
    gauss_newton_refine, nested_identify, IdentificationProblem, IdentifyError, LeastSquaresModel, ParameterLayout,
    TestCase, Weighting,
};
use crate::simulator::integrate;
use crate::sensitivity::{mechanics_distance, run_sensitivity, ParameterCloud};

use super::config::{HardeningChoice, ModelSpec, RunConfig};
use super::diagnostics::{diagnose, DiagnosticsReport, ModelSummary};
use super::reports::{CloudSummary, FitReport, ModelStudy};
use super::synthetic::{generate_synthetic_experiments, SyntheticNoise};
use super::validation::run_validation;
use super::{read_params, read_record, WorkbenchError};

/// A full overparametrization study: one calibration per model size,
/// validated on held-out tests, with a noise-sensitivity cloud each.
#[derive(Clone, Debug)]
pub struct Study {
    pub calibration: Vec<TestCase>,
    pub validation: Vec<TestCase>,
    pub models: Vec<ModelStudy>,
    pub diagnostics: DiagnosticsReport,
}

/// Calibration and held-out tests: read from the configured records, or
/// simulated from the true parameters when none are given. Synthetic
/// held-out tests use the next Sobol' point so their noise is independent.
pub fn load_tests(cfg: &RunConfig) -> Result<(Vec<TestCase>, Vec<TestCase>), WorkbenchError> {
    let from_files = |paths: &[std::path::PathBuf]| -> Result<Vec<TestCase>, WorkbenchError> {
        paths
            .iter()
            .map(|p| {
                let record = read_record(p)?;
                Ok(TestCase { program: record.meta.program.clone(), record })
            })
            .collect()
    };
    if !cfg.paths.calibration_records.is_empty() {
        return Ok((from_files(&cfg.paths.calibration_records)?, from_files(&cfg.paths.validation_records)?));
    }
    let p_true = match &cfg.synthetic.true_params {
        Some(path) => read_params(path)?,
        None => ModelSpec { hardening: HardeningChoice::New, ..cfg.model }.preset()?,
    };
    let synth = |specs: &[super::TestSpec], offset: u32| -> Result<Vec<TestCase>, WorkbenchError> {
        if specs.is_empty() {
            return Ok(Vec::new());
        }
        let programs =
            specs.iter().map(|s| s.program(&cfg.experiments.program)).collect::<Result<Vec<_>, _>>()?;
        let noise = cfg.synthetic.noise_index.map(|i| SyntheticNoise { model: cfg.noise.clone(), index: i + offset });
        let records = generate_synthetic_experiments(&p_true, &programs, noise.as_ref(), &cfg.solver)?;
        Ok(programs.into_iter().zip(records).map(|(program, record)| TestCase { program, record }).collect())
    };
    Ok((synth(&cfg.experiments.calibration, 0)?, synth(&cfg.experiments.validation, 1)?))
}

/// Unweighted least-squares problem for `spec` on `tests`.
pub fn calibration_problem(
    cfg: &RunConfig,
    spec: &ModelSpec,
    tests: &[TestCase],
) -> Result<IdentificationProblem, WorkbenchError> {
    let layout = ParameterLayout::for_model(&spec.preset()?)?;
    Ok(IdentificationProblem::new(layout, tests.to_vec(), Weighting::Identity, cfg.solver.clone())?)
}

fn starting_point(cfg: &RunConfig, spec: &ModelSpec, layout: &ParameterLayout) -> Result<Vec<f64>, WorkbenchError> {
    if let Some(path) = &cfg.paths.initial_params {
        let p0 = read_params(path)?;
        if ParameterLayout::for_model(&p0)?.names() == layout.names() {
            return Ok(layout.extract(&p0)?);
        }
    }
    Ok(layout.extract(&spec.preset()?)?)
}

/// Result of [`calibrate`].
#[derive(Clone, Debug)]
pub struct Calibration {
    pub problem: IdentificationProblem,
    pub fit: FitReport,
    /// Set when the refinement met a rank-deficient Jacobian; the fit is
    /// then the nested simplex result.
    pub rank_deficient: Option<String>,
}

/// Nested simplex identification of `spec` on `tests` followed by
/// Levenberg-Marquardt refinement.
pub fn calibrate(cfg: &RunConfig, spec: &ModelSpec, tests: &[TestCase]) -> Result<Calibration, WorkbenchError> {
    let problem = calibration_problem(cfg, spec, tests)?;
    let names = problem.layout.names();
    let p0 = starting_point(cfg, spec, &problem.layout)?;
    let nested = nested_identify(&problem, &p0, &cfg.identify.nested)?;
    let mut refine_opts = cfg.identify.refine.clone();
    if refine_opts.typical.is_none() {
        refine_opts.typical = Some(p0.iter().map(|p| p.abs()).collect());
    }
    let mut rank_deficient = None;
    let fit = match gauss_newton_refine(&problem, &nested.p, &refine_opts) {
        Ok(r) => FitReport {
            label: spec.label(),
            names,
            p0,
            phi_nested: nested.phi,
            p_star: r.p,
            phi: r.phi,
            gradient_inf: Some(r.gradient_inf),
            gradient_tol: r.gradient_tol,
            iterations: r.iterations,
            stop: Some(r.stop),
            response: r.model,
        },
        Err(e @ IdentifyError::RankDeficient { .. }) => {
            rank_deficient = Some(e.to_string());
            FitReport {
                label: spec.label(),
                names,
                p0,
                phi_nested: nested.phi,
                p_star: nested.p.clone(),
                phi: nested.phi,
                gradient_inf: None,
                gradient_tol: refine_opts.grad_tol,
                iterations: 0,
                stop: None,
                response: problem.predict(&nested.p)?,
            }
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Calibration { problem, fit, rank_deficient })
}

/// Parameter cloud around `p_star` with its summary; the first
/// `diagnose.exact_metric_draws` distances are also re-simulated in full,
/// except for inadmissible draws.
pub fn analyze_cloud(
    cfg: &RunConfig,
    problem: &IdentificationProblem,
    p_star: &[f64],
) -> Result<(ParameterCloud, CloudSummary), WorkbenchError> {
    let metric = cfg.metric.program();
    let (cloud, _) = run_sensitivity(problem, p_star, &cfg.noise, &cfg.sobol, &metric, &cfg.sensitivity)?;
    let exact = match cfg.diagnose.exact_metric_draws {
        0 => None,
        n => {
            let star = problem.layout.to_material_params(p_star)?;
            let audit = cloud
                .draws
                .iter()
                .take(n)
                .map(|p| match problem.layout.to_material_params(p) {
                    Ok(mp) => Ok(Some(mechanics_distance(&star, &mp, &metric, &cfg.solver)?)),
                    // far outside the linear regime; nothing to simulate
                    Err(IdentifyError::Inadmissible { .. }) => Ok(None),
                    Err(e) => Err(WorkbenchError::from(e)),
                })
                .collect::<Result<Vec<_>, WorkbenchError>>()?;
            Some(audit)
        }
    };
    let summary = CloudSummary::new(&cloud, &problem.layout.names(), exact);
    Ok((cloud, summary))
}

fn study_model(
    cfg: &RunConfig,
    spec: &ModelSpec,
    calibration: &[TestCase],
    validation: &[TestCase],
) -> Result<ModelStudy, WorkbenchError> {
    let Calibration { problem, fit, mut rank_deficient } = calibrate(cfg, spec, calibration)?;
    let p_star = problem.layout.to_material_params(&fit.p_star)?;
    let validation = run_validation(&p_star, validation, &cfg.solver)?;

    let (mut cloud, mut cloud_summary) = (None, None);
    if rank_deficient.is_none() {
        match analyze_cloud(cfg, &problem, &fit.p_star) {
            Ok((c, s)) => {
                cloud = Some(c);
                cloud_summary = Some(s);
            }
            Err(e) if e.is_rank_deficient() => rank_deficient = Some(e.to_string()),
            Err(e) => return Err(e),
        }
    }

    let temperature = calibration
        .iter()
        .map(|t| {
            let trace = integrate(&p_star, &t.program, &cfg.solver)?;
            Ok(trace.times.iter().copied().zip(trace.theta.iter().copied()).collect())
        })
        .collect::<Result<Vec<_>, WorkbenchError>>()?;

    Ok(ModelStudy { spec: *spec, fit, validation, cloud, cloud_summary, rank_deficient, temperature })
}

/// Calibrates every configured model size, validates each on the held-out
/// tests, builds its parameter cloud and applies the diagnostics.
pub fn run_study(cfg: &RunConfig) -> Result<Study, WorkbenchError> {
    cfg.validate()?;
    let (calibration, validation) = load_tests(cfg)?;
    let sizes = if cfg.diagnose.branch_counts.is_empty() {
        vec![cfg.model.n_branches]
    } else {
        cfg.diagnose.branch_counts.clone()
    };
    let models = sizes
        .iter()
        .map(|n| study_model(cfg, &cfg.model.with_branches(*n), &calibration, &validation))
        .collect::<Result<Vec<_>, _>>()?;
    let summaries: Vec<ModelSummary> = models
        .iter()
        .map(|m| ModelSummary {
            label: m.spec.label(),
            n_branches: m.spec.n_branches,
            n_params: m.fit.names.len(),
            phi: m.fit.phi,
            phi_validation: (!m.validation.flagged).then_some(m.validation.phi),
            max_abs_correlation: m.cloud_summary.as_ref().map(|c| c.max_abs_correlation),
            cloud_size: m.cloud_summary.as_ref().map(|c| c.cloud_size),
            rank_deficient: m.rank_deficient.is_some(),
        })
        .collect();
    let diagnostics = diagnose(&summaries, cfg.noise.sigma, &cfg.diagnose.thresholds);
    Ok(Study { calibration, validation, models, diagnostics })
}
