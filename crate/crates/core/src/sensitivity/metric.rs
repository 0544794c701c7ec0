use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constitutive::MaterialParams;
use crate::identify::{ParameterLayout, Transform};
use crate::simulator::{integrate, make_metric_program, LoadingProgram, SimulationError, SolverOptions};

use super::SensitivityError;

/// Pulsating reference program on which parameter sets are compared.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricProgramConfig {
    pub n_cycles: usize,
    /// Peak stress of the last cycle, MPa.
    pub sigma_max: f64,
    /// Peak of the first cycle as a fraction of `sigma_max`.
    pub start_fraction: f64,
    pub period: f64,
}

impl Default for MetricProgramConfig {
    fn default() -> Self {
        MetricProgramConfig { n_cycles: 50, sigma_max: 890.0, start_fraction: 0.5, period: 1.0 }
    }
}

impl MetricProgramConfig {
    pub fn program(&self) -> LoadingProgram {
        make_metric_program(self.n_cycles, self.sigma_max, self.period, self.start_fraction)
    }
}

/// Largest accumulated plastic arc length reached on `program`.
pub fn max_odqvist(p: &MaterialParams, program: &LoadingProgram, opts: &SolverOptions) -> Result<f64, SimulationError> {
    Ok(integrate(p, program, opts)?.s.iter().copied().fold(0.0, f64::max))
}

/// Checks that the metric program does not drive `p` further in plastic arc
/// length than the calibration programs did.
pub fn check_metric_range(
    p: &MaterialParams,
    metric: &LoadingProgram,
    calibration: &[&LoadingProgram],
    opts: &SolverOptions,
) -> Result<(f64, f64), SensitivityError> {
    let s_metric = max_odqvist(p, metric, opts)?;
    let mut s_cal = 0.0f64;
    for prog in calibration {
        s_cal = s_cal.max(max_odqvist(p, prog, opts)?);
    }
    if s_metric > s_cal {
        return Err(SensitivityError::InvalidConfig(format!(
            "metric program reaches s = {s_metric:e}, beyond the calibrated range s ≤ {s_cal:e}"
        )));
    }
    Ok((s_metric, s_cal))
}

/// `max_t |ε₁₁(t, p1) − ε₁₁(t, p2)|` on the shared grid of `program`.
pub fn mechanics_distance(
    p1: &MaterialParams,
    p2: &MaterialParams,
    program: &LoadingProgram,
    opts: &SolverOptions,
) -> Result<f64, SimulationError> {
    let (a, b) = rayon::join(|| integrate(p1, program, opts), || integrate(p2, program, opts));
    let (a, b) = (a?, b?);
    if a.len() != b.len() {
        return Err(SimulationError::TraceMismatch("traces of different length".into()));
    }
    Ok(a.strain.iter().zip(&b.strain).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

/// `∂ε₁₁(t)/∂p` on the grid of `program` by central differences, one column
/// per identified parameter. Steps follow the Jacobian rule.
pub fn strain_sensitivity(
    layout: &ParameterLayout,
    p_star: &[f64],
    program: &LoadingProgram,
    opts: &SolverOptions,
    rel_step: f64,
    floor: f64,
) -> Result<DMatrix<f64>, SensitivityError> {
    let transforms = layout.transforms();
    let strain = |p: &[f64]| -> Result<Vec<f64>, SensitivityError> {
        let mp = layout.to_material_params(p)?;
        Ok(integrate(&mp, program, opts)?.strain)
    };
    let columns: Vec<Vec<f64>> = (0..p_star.len())
        .into_par_iter()
        .map(|i| {
            let h = match transforms[i] {
                Transform::Log => rel_step * p_star[i].abs(),
                Transform::Linear => rel_step * p_star[i].abs().max(floor),
            };
            let mut plus = p_star.to_vec();
            let mut minus = p_star.to_vec();
            plus[i] += h;
            minus[i] -= h;
            let (a, b) = (strain(&plus)?, strain(&minus)?);
            Ok(a.iter().zip(&b).map(|(a, b)| (a - b) / (2.0 * h)).collect())
        })
        .collect::<Result<_, SensitivityError>>()?;
    let rows = columns.first().map_or(0, |c| c.len());
    Ok(DMatrix::from_fn(rows, columns.len(), |r, c| columns[c][r]))
}

/// `max_t |∂ε/∂p(t) · dp|`.
pub fn linearized_distance(d_eps_dp: &DMatrix<f64>, dp: &[f64]) -> Result<f64, SensitivityError> {
    if dp.len() != d_eps_dp.ncols() {
        return Err(SensitivityError::Shape(format!(
            "perturbation has {} entries, sensitivity has {} columns",
            dp.len(),
            d_eps_dp.ncols()
        )));
    }
    Ok(d_eps_dp
        .row_iter()
        .map(|row| row.iter().zip(dp).map(|(a, b)| a * b).sum::<f64>().abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linearized_distance_is_max_of_inner_products() {
        let s = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, -3.0, 0.5, 0.0, 1.0]);
        assert_eq!(linearized_distance(&s, &[1.0, 1.0]).unwrap(), 3.0);
        assert_eq!(linearized_distance(&s, &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(linearized_distance(&s, &[3.0, 3.0]).unwrap(), 9.0);
        assert!(linearized_distance(&s, &[1.0]).is_err());
    }
}
