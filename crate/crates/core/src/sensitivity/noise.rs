use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::simulator::ExperimentRecord;

use super::SensitivityError;

/// Smooth measurement noise: a sum of `n_modes` half-sine modes over the
/// cyclic block of each test, with coefficients `σ·z`, `z` standard normal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseModel {
    /// Standard deviation of the mode coefficients, dimensionless strain.
    pub sigma: f64,
    pub n_modes: usize,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel { sigma: 1e-6, n_modes: 20 }
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<(), SensitivityError> {
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(SensitivityError::InvalidConfig(format!("noise sigma must be non-negative, got {}", self.sigma)));
        }
        if self.n_modes == 0 {
            return Err(SensitivityError::InvalidConfig("noise needs at least one mode".into()));
        }
        Ok(())
    }

    /// Noise on the concatenated records, using normals `z` laid out as
    /// `n_modes` consecutive values per record.
    pub fn realize(&self, z: &[f64], records: &[&ExperimentRecord]) -> Result<Vec<f64>, SensitivityError> {
        self.validate()?;
        if z.len() != self.n_modes * records.len() {
            return Err(SensitivityError::Shape(format!(
                "{} normals for {} records of {} modes",
                z.len(),
                records.len(),
                self.n_modes
            )));
        }
        let mut out = Vec::new();
        for (rec, z) in records.iter().zip(z.chunks_exact(self.n_modes)) {
            let coeffs: Vec<f64> = z.iter().map(|z| self.sigma * z).collect();
            out.extend(synthesize_noise(&coeffs, rec));
        }
        Ok(out)
    }
}

/// `Σ_k σ_k sin(kπ t_i / T)` at every recorded turning point, with `t_i`
/// relative to the start of the cyclic block and `T` its duration.
pub fn synthesize_noise(coeffs: &[f64], record: &ExperimentRecord) -> Vec<f64> {
    let t_end = record.meta.block_duration;
    record
        .times()
        .iter()
        .map(|t| {
            if t_end <= 0.0 {
                return 0.0;
            }
            coeffs.iter().enumerate().map(|(k, s)| s * ((k + 1) as f64 * PI * t / t_end).sin()).sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{CycleExtrema, LoadingProgram, RecordMeta};

    fn record(times: &[(f64, f64)], t_end: f64) -> ExperimentRecord {
        ExperimentRecord {
            cycles: times
                .iter()
                .map(|&(a, b)| CycleExtrema { max_strain: 0.0, min_strain: 0.0, max_time: a, min_time: b })
                .collect(),
            meta: RecordMeta {
                sigma_m: None,
                sigma_a_max: None,
                block_duration: t_end,
                program: LoadingProgram::default(),
                provenance: "test".into(),
            },
            temperature: None,
        }
    }

    #[test]
    fn zero_coefficients_give_zero() {
        let r = record(&[(0.25, 0.75), (1.25, 1.75)], 2.0);
        assert_eq!(synthesize_noise(&[0.0; 20], &r), vec![0.0; 4]);
    }

    #[test]
    fn single_mode_at_half_time() {
        let r = record(&[(1.0, 2.0)], 2.0);
        let n = synthesize_noise(&[1e-6], &r);
        assert_eq!(n[0], 1e-6);
        // every mode vanishes at t = T
        let all = synthesize_noise(&[1.0; 20], &r);
        assert!(all[1].abs() < 1e-13);
    }

    #[test]
    fn realize_checks_shape() {
        let r = record(&[(1.0, 2.0)], 2.0);
        let m = NoiseModel { sigma: 1.0, n_modes: 2 };
        assert!(m.realize(&[1.0; 3], &[&r]).is_err());
        let v = m.realize(&[1.0, 0.0, 0.0, 1.0], &[&r, &r]).unwrap();
        assert_eq!(v.len(), 4);
        assert_eq!(v[0], 1.0);
        assert!(NoiseModel { sigma: -1.0, n_modes: 2 }.validate().is_err());
    }
}
