use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::identify::{jacobian_fd, IdentificationProblem, JacobianOptions, LeastSquaresModel, ParameterVector};
use crate::simulator::LoadingProgram;

use super::{linearized_distance, mechanics_distance, sobol_normals, strain_sensitivity, FastRefit, NoiseModel, SensitivityError, SobolConfig};

/// `Corr_ij = P_ij / √(P_ii P_jj)` with `P = JᵀJ`.
pub fn correlation_matrix(j: &DMatrix<f64>) -> Result<DMatrix<f64>, SensitivityError> {
    let p = j.tr_mul(j);
    let n = p.nrows();
    if let Some(i) = (0..n).find(|&i| !(p[(i, i)] > 0.0)) {
        return Err(SensitivityError::ZeroColumn(i));
    }
    Ok(DMatrix::from_fn(n, n, |a, b| {
        if a == b {
            1.0
        } else {
            (p[(a, b)] / (p[(a, a)] * p[(b, b)]).sqrt()).clamp(-1.0, 1.0)
        }
    }))
}

/// Largest `|Corr_ij|` with `i ≠ j`, and its position.
pub fn max_off_diagonal(corr: &DMatrix<f64>) -> Option<(f64, usize, usize)> {
    let mut best: Option<(f64, usize, usize)> = None;
    for a in 0..corr.nrows() {
        for b in (a + 1)..corr.ncols() {
            let v = corr[(a, b)].abs();
            if best.is_none_or(|(m, _, _)| v > m) {
                best = Some((v, a, b));
            }
        }
    }
    best
}

/// Mean linearised distance of the draws from `p_star`.
pub fn cloud_size(p_star: &[f64], draws: &[Vec<f64>], d_eps_dp: &DMatrix<f64>) -> Result<f64, SensitivityError> {
    if draws.is_empty() {
        return Err(SensitivityError::InvalidConfig("cloud size of an empty draw set".into()));
    }
    let d = draw_distances(p_star, draws, d_eps_dp)?;
    Ok(d.iter().sum::<f64>() / d.len() as f64)
}

fn draw_distances(p_star: &[f64], draws: &[Vec<f64>], d_eps_dp: &DMatrix<f64>) -> Result<Vec<f64>, SensitivityError> {
    draws
        .par_iter()
        .map(|p| {
            if p.len() != p_star.len() {
                return Err(SensitivityError::Shape("draw and p* differ in length".into()));
            }
            let dp: Vec<f64> = p.iter().zip(p_star).map(|(a, b)| a - b).collect();
            linearized_distance(d_eps_dp, &dp)
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SensitivityOptions {
    pub jacobian: JacobianOptions,
}

/// Quantities computed once at `p*`.
#[derive(Clone, Debug)]
pub struct Linearization {
    /// `∂Mod/∂p` of the calibration problem.
    pub jacobian: DMatrix<f64>,
    /// `∂ε₁₁(t)/∂p` on the metric program.
    pub d_eps_dp: DMatrix<f64>,
}

impl Linearization {
    pub fn assemble(
        problem: &IdentificationProblem,
        p_star: &[f64],
        metric: &LoadingProgram,
        opts: &SensitivityOptions,
    ) -> Result<Self, SensitivityError> {
        let jacobian = jacobian_fd(problem, p_star, &opts.jacobian)?;
        let d_eps_dp = strain_sensitivity(&problem.layout, p_star, metric, &problem.solver, opts.jacobian.rel_step, opts.jacobian.floor)?;
        Ok(Linearization { jacobian, d_eps_dp })
    }
}

/// Noise-induced parameter scatter around one optimum.
#[derive(Clone, Debug)]
pub struct ParameterCloud {
    pub p_star: ParameterVector,
    pub draws: Vec<Vec<f64>>,
    /// Linearised distance of each draw from `p*`.
    pub distances: Vec<f64>,
    pub cloud_size: f64,
    pub correlation: DMatrix<f64>,
    /// `|R_ii| / max |R_jj|` of the column-scaled Jacobian.
    pub diagonal_ratios: Vec<f64>,
}

impl ParameterCloud {
    pub fn max_abs_correlation(&self) -> f64 {
        max_off_diagonal(&self.correlation).map_or(0.0, |m| m.0)
    }
}

/// Monte-Carlo cloud from a prepared linearisation: one fast refit per Sobol'
/// noise draw, each scored by the linearised metric.
pub fn cloud_from_linearization(
    problem: &IdentificationProblem,
    p_star: &[f64],
    lin: &Linearization,
    noise: &NoiseModel,
    sobol: &SobolConfig,
    opts: &SensitivityOptions,
) -> Result<ParameterCloud, SensitivityError> {
    noise.validate()?;
    let n_tests = problem.tests.len();
    if sobol.dimensions != noise.n_modes * n_tests {
        return Err(SensitivityError::InvalidConfig(format!(
            "Sobol' dimensions {} must equal {} modes × {n_tests} tests",
            sobol.dimensions, noise.n_modes
        )));
    }
    let refit = FastRefit::new(&lin.jacobian, problem.weighting(), p_star, opts.jacobian.floor)?;
    let z = sobol_normals(sobol)?;
    let records: Vec<_> = problem.tests.iter().map(|t| &t.record).collect();
    let draws: Vec<Vec<f64>> = (0..z.nrows())
        .into_par_iter()
        .map(|r| {
            let zr: Vec<f64> = z.row(r).iter().copied().collect();
            refit.refit(&noise.realize(&zr, &records)?)
        })
        .collect::<Result<_, SensitivityError>>()?;
    let distances = draw_distances(p_star, &draws, &lin.d_eps_dp)?;
    let cloud_size = distances.iter().sum::<f64>() / distances.len() as f64;
    Ok(ParameterCloud {
        p_star: ParameterVector { layout: problem.layout.clone(), values: p_star.to_vec() },
        draws,
        distances,
        cloud_size,
        correlation: correlation_matrix(&problem.weighting().whiten_matrix(&lin.jacobian))?,
        diagonal_ratios: refit.diagonal_ratios(),
    })
}

/// Builds `J` and the metric sensitivity at `p*`, then the parameter cloud.
pub fn run_sensitivity(
    problem: &IdentificationProblem,
    p_star: &[f64],
    noise: &NoiseModel,
    sobol: &SobolConfig,
    metric: &LoadingProgram,
    opts: &SensitivityOptions,
) -> Result<(ParameterCloud, Linearization), SensitivityError> {
    let lin = Linearization::assemble(problem, p_star, metric, opts)?;
    let cloud = cloud_from_linearization(problem, p_star, &lin, noise, sobol, opts)?;
    Ok((cloud, lin))
}

/// Full-simulation distances of the first `n` draws, for auditing the
/// linearised ones.
pub fn exact_distances(
    cloud: &ParameterCloud,
    n: usize,
    metric: &LoadingProgram,
    solver: &crate::simulator::SolverOptions,
) -> Result<Vec<f64>, SensitivityError> {
    let layout = &cloud.p_star.layout;
    let star = layout.to_material_params(&cloud.p_star.values)?;
    cloud
        .draws
        .iter()
        .take(n)
        .map(|p| Ok(mechanics_distance(&star, &layout.to_material_params(p)?, metric, solver)?))
        .collect()
}
